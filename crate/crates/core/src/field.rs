//! Arithmetic in GF(q) for prime powers q <= 32, and rank/nullity of dense
//! matrices over it.
//!
//! Elements are encoded as integers `0..q`. For q = p^k an element
//! `a_0 + a_1 x + ... + a_{k-1} x^{k-1}` (coefficients in `0..p`) is stored as
//! `a_0 + a_1 p + ... + a_{k-1} p^{k-1}`, so 0 and 1 are the field's zero and
//! one and the prime subfield is `0..p` with arithmetic mod p. Extension
//! fields use these fixed defining polynomials:
//!
//! | q  | polynomial      |
//! |----|-----------------|
//! | 4  | x^2 + x + 1     |
//! | 8  | x^3 + x + 1     |
//! | 9  | x^2 + 2x + 2    |
//! | 16 | x^4 + x + 1     |
//! | 25 | x^2 + 4x + 2    |
//! | 27 | x^3 + 2x + 1    |
//! | 32 | x^5 + x^2 + 1   |

use crate::error::{Error, Result};

/// Every supported field size, ascending.
pub const SUPPORTED_Q: [u32; 18] = [2, 3, 4, 5, 7, 8, 9, 11, 13, 16, 17, 19, 23, 25, 27, 29, 31, 32];

const STRIDE: usize = 32;

/// Returns `(p, k, low coefficients of the monic defining polynomial)`.
fn field_params(q: u32) -> Option<(u32, u32, &'static [u32])> {
    Some(match q {
        2 | 3 | 5 | 7 | 11 | 13 | 17 | 19 | 23 | 29 | 31 => (q, 1, &[]),
        4 => (2, 2, &[1, 1]),
        8 => (2, 3, &[1, 1, 0]),
        9 => (3, 2, &[2, 2]),
        16 => (2, 4, &[1, 1, 0, 0]),
        25 => (5, 2, &[2, 4]),
        27 => (3, 3, &[1, 2, 0]),
        32 => (2, 5, &[1, 0, 1, 0, 0]),
        _ => return None,
    })
}

pub fn is_supported(q: u32) -> bool {
    field_params(q).is_some()
}

#[derive(Clone, Debug)]
pub struct FieldTable {
    q: u32,
    p: u32,
    k: u32,
    add: Vec<u8>,
    sub: Vec<u8>,
    mul: Vec<u8>,
    neg: Vec<u8>,
    inv: Vec<u8>,
}

impl FieldTable {
    pub fn new(q: u32) -> Result<Self> {
        let (p, k, modulus) = field_params(q).ok_or(Error::UnsupportedField(q))?;
        let digits = |mut x: u32| -> Vec<u32> {
            (0..k)
                .map(|_| {
                    let r = x % p;
                    x /= p;
                    r
                })
                .collect()
        };
        let pack = |ds: &[u32]| -> u32 { ds.iter().rev().fold(0, |acc, &c| acc * p + c) };

        let n = q as usize;
        let mut add = vec![0u8; STRIDE * STRIDE];
        let mut mul = vec![0u8; STRIDE * STRIDE];
        for a in 0..q {
            let da = digits(a);
            for b in 0..q {
                let db = digits(b);
                let sum: Vec<u32> = da.iter().zip(&db).map(|(x, y)| (x + y) % p).collect();
                // schoolbook product, then reduce x^j for j >= k
                let mut prod = vec![0u32; 2 * k as usize];
                for (i, x) in da.iter().enumerate() {
                    for (j, y) in db.iter().enumerate() {
                        prod[i + j] = (prod[i + j] + x * y) % p;
                    }
                }
                for j in (k as usize..prod.len()).rev() {
                    let c = prod[j];
                    if c == 0 {
                        continue;
                    }
                    prod[j] = 0;
                    // x^j = x^(j-k) * x^k and x^k = -sum modulus[i] x^i
                    for (i, m) in modulus.iter().enumerate() {
                        let t = j - k as usize + i;
                        prod[t] = (prod[t] + (p - c) * m) % p;
                    }
                }
                let (ai, bi) = (a as usize, b as usize);
                add[ai * STRIDE + bi] = pack(&sum) as u8;
                mul[ai * STRIDE + bi] = pack(&prod[..k as usize]) as u8;
            }
        }
        let mut neg = vec![0u8; STRIDE];
        let mut inv = vec![0u8; STRIDE];
        for a in 0..n {
            neg[a] = (0..n).find(|&b| add[a * STRIDE + b] == 0).expect("additive inverse") as u8;
            if a != 0 {
                inv[a] = (1..n).find(|&b| mul[a * STRIDE + b] == 1).expect("multiplicative inverse") as u8;
            }
        }
        let mut sub = vec![0u8; STRIDE * STRIDE];
        for a in 0..n {
            for b in 0..n {
                sub[a * STRIDE + b] = add[a * STRIDE + neg[b] as usize];
            }
        }
        Ok(Self {
            q,
            p,
            k,
            add,
            sub,
            mul,
            neg,
            inv,
        })
    }

    pub fn q(&self) -> u32 {
        self.q
    }

    pub fn characteristic(&self) -> u32 {
        self.p
    }

    pub fn degree(&self) -> u32 {
        self.k
    }

    #[inline]
    pub fn add(&self, a: u8, b: u8) -> u8 {
        self.add[(a as usize) * STRIDE + b as usize]
    }

    #[inline]
    pub fn sub(&self, a: u8, b: u8) -> u8 {
        self.sub[(a as usize) * STRIDE + b as usize]
    }

    #[inline]
    pub fn mul(&self, a: u8, b: u8) -> u8 {
        self.mul[(a as usize) * STRIDE + b as usize]
    }

    #[inline]
    pub fn neg(&self, a: u8) -> u8 {
        self.neg[a as usize]
    }

    /// Multiplicative inverse; `None` for zero.
    pub fn inv(&self, a: u8) -> Option<u8> {
        (a != 0).then(|| self.inv[a as usize])
    }

    pub fn pow(&self, a: u8, mut e: u32) -> u8 {
        let (mut base, mut acc) = (a, 1u8);
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(acc, base);
            }
            base = self.mul(base, base);
            e >>= 1;
        }
        acc
    }

    pub fn elements(&self) -> impl Iterator<Item = u8> {
        0..self.q as u8
    }

    /// Rank of the row-major `rows x cols` matrix in `data`, destroying it.
    pub fn rank_in_place(&self, data: &mut [u8], rows: usize, cols: usize) -> usize {
        debug_assert_eq!(data.len(), rows * cols);
        let mut rank = 0;
        for c in 0..cols {
            if rank == rows {
                break;
            }
            let Some(pivot) = (rank..rows).find(|&r| data[r * cols + c] != 0) else {
                continue;
            };
            if pivot != rank {
                for j in c..cols {
                    data.swap(pivot * cols + j, rank * cols + j);
                }
            }
            let scale = self.inv[data[rank * cols + c] as usize] as usize;
            for j in c..cols {
                let x = &mut data[rank * cols + j];
                *x = self.mul[scale * STRIDE + *x as usize];
            }
            let (head, tail) = data.split_at_mut((rank + 1) * cols);
            let pivot_row = &head[rank * cols..];
            for row in tail.chunks_exact_mut(cols) {
                let f = row[c] as usize;
                if f == 0 {
                    continue;
                }
                let mul_row = &self.mul[f * STRIDE..f * STRIDE + STRIDE];
                for j in c..cols {
                    row[j] = self.sub[(row[j] as usize) * STRIDE + mul_row[pivot_row[j] as usize] as usize];
                }
            }
            rank += 1;
        }
        rank
    }
}

/// Dense row-major matrix over GF(q).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FqMatrix {
    rows: usize,
    cols: usize,
    data: Vec<u8>,
}

impl FqMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self {
            rows,
            cols,
            data: vec![0; rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.set(i, i, 1);
        }
        m
    }

    pub fn from_data(rows: usize, cols: usize, data: Vec<u8>) -> Self {
        assert_eq!(data.len(), rows * cols, "matrix data has the wrong length");
        Self { rows, cols, data }
    }

    pub fn from_rows(rows: &[Vec<u8>]) -> Self {
        let cols = rows.first().map_or(0, Vec::len);
        let data: Vec<u8> = rows.iter().flat_map(|r| r.iter().copied()).collect();
        Self::from_data(rows.len(), cols, data)
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn data(&self) -> &[u8] {
        &self.data
    }

    pub fn get(&self, r: usize, c: usize) -> u8 {
        self.data[r * self.cols + c]
    }

    pub fn set(&mut self, r: usize, c: usize, value: u8) {
        self.data[r * self.cols + c] = value;
    }

    pub fn row(&self, r: usize) -> &[u8] {
        &self.data[r * self.cols..(r + 1) * self.cols]
    }

    pub fn transpose(&self) -> Self {
        let mut t = Self::zeros(self.cols, self.rows);
        for r in 0..self.rows {
            for c in 0..self.cols {
                t.set(c, r, self.get(r, c));
            }
        }
        t
    }

    pub fn rank(&self, field: &FieldTable) -> usize {
        let mut data = self.data.clone();
        field.rank_in_place(&mut data, self.rows, self.cols)
    }

    /// Entries all lie in the field.
    pub fn is_valid_for(&self, field: &FieldTable) -> bool {
        self.data.iter().all(|&x| u32::from(x) < field.q())
    }
}

/// `cols - rank`: dimension of the kernel of `x -> M x`.
pub fn nullity(field: &FieldTable, matrix: &FqMatrix) -> usize {
    matrix.cols() - matrix.rank(field)
}
