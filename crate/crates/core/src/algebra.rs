//! Path bases and structure constants of `A = End(P_{Q,d})` and its radical.
//!
//! `P_{Q,d}` is written as a sum of indecomposable projectives `P(v_1), ...,
//! P(v_t)` over the slot list. The `(i, j)` block of `A` is identified with the
//! span of paths `v_i ~> v_j`; composing `(i, k, c)` after `(k, j, p)` gives
//! `(i, j, cp)`, and every other product of basis elements vanishes.

use std::collections::HashMap;

use crate::error::{Error, Result};
use crate::field::{FieldTable, FqMatrix};
use crate::quiver::{Path, Quiver, SummandVector, PATH_CAP};

/// Vertex positions `v_1, ..., v_t`, each vertex repeated `d_v` times, in
/// vertex order.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SlotList {
    slots: Vec<usize>,
}

impl SlotList {
    pub fn new(d: &SummandVector) -> Self {
        let slots = d
            .values()
            .iter()
            .enumerate()
            .flat_map(|(v, &k)| std::iter::repeat_n(v, k as usize))
            .collect();
        Self { slots }
    }

    pub fn len(&self) -> usize {
        self.slots.len()
    }

    pub fn is_empty(&self) -> bool {
        self.slots.is_empty()
    }

    pub fn vertex(&self, slot: usize) -> usize {
        self.slots[slot]
    }

    pub fn as_slice(&self) -> &[usize] {
        &self.slots
    }

    pub fn ids<'q>(&self, quiver: &'q Quiver) -> Vec<&'q str> {
        self.slots.iter().map(|&v| quiver.vertex_id(v)).collect()
    }
}

/// Basis element `(i, j, p)` with `p: v_i ~> v_j`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct BasisElement {
    pub i: usize,
    pub j: usize,
    pub path: Path,
}

#[derive(Clone, Debug)]
pub struct AlgebraBasis {
    elements: Vec<BasisElement>,
    include_constants: bool,
}

impl AlgebraBasis {
    pub fn dim(&self) -> usize {
        self.elements.len()
    }

    pub fn elements(&self) -> &[BasisElement] {
        &self.elements
    }

    pub fn element(&self, a: usize) -> &BasisElement {
        &self.elements[a]
    }

    pub fn includes_constants(&self) -> bool {
        self.include_constants
    }

    /// Indices whose path has length at least `l`, in basis order.
    pub fn indices_with_len_at_least(&self, l: usize) -> Vec<usize> {
        (0..self.dim()).filter(|&a| self.elements[a].path.len() >= l).collect()
    }

    /// Indices whose path is shorter than `m`, in basis order.
    pub fn indices_with_len_below(&self, m: usize) -> Vec<usize> {
        (0..self.dim()).filter(|&a| self.elements[a].path.len() < m).collect()
    }
}

/// Basis of `A` (`include_constants`) or of `rad A`, ordered by
/// `(i, j, path)` with paths in lexicographic order.
pub fn build_basis(quiver: &Quiver, d: &SummandVector, include_constants: bool) -> Result<(SlotList, AlgebraBasis)> {
    let weighted = quiver.weighted_path_count(d, include_constants);
    if weighted > PATH_CAP {
        return Err(Error::PathCap {
            count: weighted,
            cap: PATH_CAP,
        });
    }
    let slots = SlotList::new(d);
    let min_len = usize::from(!include_constants);
    let n = quiver.vertex_count();
    let mut paths: Vec<Vec<Option<Vec<Path>>>> = vec![vec![None; n]; n];
    let mut elements = Vec::with_capacity(weighted as usize);
    for i in 0..slots.len() {
        for j in 0..slots.len() {
            let (u, v) = (slots.vertex(i), slots.vertex(j));
            let list = paths[u][v].get_or_insert_with(|| quiver.paths_between(u, v, min_len));
            elements.extend(list.iter().map(|p| BasisElement { i, j, path: p.clone() }));
        }
    }
    Ok((
        slots,
        AlgebraBasis {
            elements,
            include_constants,
        },
    ))
}

/// Indices of the basis of `rad^l`: paths of length at least `l`. With `l = 0`
/// this is every index of a basis that includes constants.
pub fn radical_power_indices(basis: &AlgebraBasis, l: usize) -> Result<Vec<usize>> {
    if l >= 1 && basis.includes_constants() {
        return Err(Error::Invalid(
            "radical powers with l >= 1 are indexed on a radical basis".into(),
        ));
    }
    Ok(basis.indices_with_len_at_least(l))
}

/// Sparse multiplication table: every nonzero product of basis elements.
#[derive(Clone, Debug)]
pub struct StructureConstants {
    dim: usize,
    products: Vec<(usize, usize, usize)>,
    lookup: HashMap<(usize, usize), usize>,
}

impl StructureConstants {
    pub fn new(basis: &AlgebraBasis) -> Self {
        let elements = basis.elements();
        let mut position: HashMap<(usize, usize, &[usize]), usize> = HashMap::with_capacity(elements.len());
        let mut by_left: HashMap<(usize, usize), Vec<usize>> = HashMap::new();
        for (a, e) in elements.iter().enumerate() {
            position.insert((e.i, e.j, e.path.arrows.as_slice()), a);
            by_left.entry((e.i, e.path.start)).or_default().push(a);
        }
        let mut products = Vec::new();
        for (a, ea) in elements.iter().enumerate() {
            let Some(right) = by_left.get(&(ea.j, ea.path.end)) else {
                continue;
            };
            for &b in right {
                let eb = &elements[b];
                let cp = ea.path.concat(&eb.path).expect("slot vertices agree");
                // a missing product only happens for a radical basis when
                // both factors are constants, which cannot occur there
                if let Some(&c) = position.get(&(ea.i, eb.j, cp.arrows.as_slice())) {
                    products.push((a, b, c));
                }
            }
        }
        products.sort_unstable();
        let lookup = products.iter().map(|&(a, b, c)| ((a, b), c)).collect();
        Self {
            dim: elements.len(),
            products,
            lookup,
        }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    /// Index of `e_a e_b`, or `None` when the product is zero.
    pub fn product(&self, a: usize, b: usize) -> Option<usize> {
        self.lookup.get(&(a, b)).copied()
    }

    /// All `(a, b, c)` with `e_a e_b = e_c`, sorted.
    pub fn products(&self) -> &[(usize, usize, usize)] {
        &self.products
    }

    /// `x * y` for coordinate vectors over this basis.
    pub fn multiply(&self, field: &FieldTable, x: &[u8], y: &[u8]) -> Vec<u8> {
        let mut out = vec![0u8; self.dim];
        for &(a, b, c) in &self.products {
            if x[a] != 0 && y[b] != 0 {
                out[c] = field.add(out[c], field.mul(x[a], y[b]));
            }
        }
        out
    }

    /// `xy - yx`.
    pub fn commutator(&self, field: &FieldTable, x: &[u8], y: &[u8]) -> Vec<u8> {
        let xy = self.multiply(field, x, y);
        let yx = self.multiply(field, y, x);
        xy.iter().zip(&yx).map(|(&s, &t)| field.sub(s, t)).collect()
    }
}

/// Coordinates of an element over some basis.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct RadicalVector {
    pub coords: Vec<u8>,
}

impl RadicalVector {
    pub fn zero(dim: usize) -> Self {
        Self { coords: vec![0; dim] }
    }

    pub fn basis(dim: usize, a: usize) -> Self {
        let mut v = Self::zero(dim);
        v.coords[a] = 1;
        v
    }

    pub fn len(&self) -> usize {
        self.coords.len()
    }

    pub fn is_empty(&self) -> bool {
        self.coords.is_empty()
    }
}

/// Position of `index` inside each index list, or `usize::MAX`.
fn positions(list: &[usize], dim: usize) -> Vec<usize> {
    let mut pos = vec![usize::MAX; dim];
    for (k, &a) in list.iter().enumerate() {
        pos[a] = k;
    }
    pos
}

/// One nonzero contribution of a basis element of `x` to `ad_x`: entry
/// `(row, col)` gains `+x_k` (or `-x_k` when `negate`).
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct StencilEntry {
    pub row: u32,
    pub col: u32,
    pub negate: bool,
}

/// Precomputed shape of `y -> xy - yx` from `span(domain)` to
/// `span(codomain)`, for `x` ranging over `span(x_support)`.
#[derive(Clone, Debug)]
pub struct AdjointStencil {
    rows: usize,
    cols: usize,
    entries: Vec<Vec<StencilEntry>>,
}

impl AdjointStencil {
    pub fn new(sc: &StructureConstants, x_support: &[usize], domain: &[usize], codomain: &[usize]) -> Self {
        let dim = sc.dim();
        let xpos = positions(x_support, dim);
        let dpos = positions(domain, dim);
        let cpos = positions(codomain, dim);
        let mut entries = vec![Vec::new(); x_support.len()];
        for &(a, b, c) in sc.products() {
            if cpos[c] == usize::MAX {
                continue;
            }
            let row = cpos[c] as u32;
            // x = e_a, y = e_b contributes +e_c through xy
            if xpos[a] != usize::MAX && dpos[b] != usize::MAX {
                entries[xpos[a]].push(StencilEntry {
                    row,
                    col: dpos[b] as u32,
                    negate: false,
                });
            }
            // x = e_b, y = e_a contributes -e_c through yx
            if xpos[b] != usize::MAX && dpos[a] != usize::MAX {
                entries[xpos[b]].push(StencilEntry {
                    row,
                    col: dpos[a] as u32,
                    negate: true,
                });
            }
        }
        Self {
            rows: codomain.len(),
            cols: domain.len(),
            entries,
        }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn x_dim(&self) -> usize {
        self.entries.len()
    }

    /// True when `ad_x` is zero for every `x` in the support.
    pub fn is_zero(&self) -> bool {
        self.entries.iter().all(Vec::is_empty)
    }

    /// Writes `ad_x` (row-major, `rows x cols`) into `out`; `x` holds
    /// coordinates over the x-support.
    pub fn fill(&self, field: &FieldTable, x: &[u8], out: &mut [u8]) {
        out.fill(0);
        let cols = self.cols;
        for (k, &xk) in x.iter().enumerate() {
            if xk == 0 {
                continue;
            }
            let neg = field.neg(xk);
            for e in &self.entries[k] {
                let slot = &mut out[e.row as usize * cols + e.col as usize];
                *slot = field.add(*slot, if e.negate { neg } else { xk });
            }
        }
    }

    pub fn matrix(&self, field: &FieldTable, x: &[u8]) -> FqMatrix {
        let mut data = vec![0u8; self.rows * self.cols];
        self.fill(field, x, &mut data);
        FqMatrix::from_data(self.rows, self.cols, data)
    }
}

/// Matrix of `y -> xy - yx` from `span(domain)` to `span(codomain)`; `x` holds
/// coordinates over the full basis of `sc`. Components outside the codomain
/// are dropped.
pub fn adjoint_matrix(
    field: &FieldTable,
    sc: &StructureConstants,
    x: &RadicalVector,
    domain: &[usize],
    codomain: &[usize],
) -> FqMatrix {
    assert_eq!(x.len(), sc.dim(), "x must have one coordinate per basis element");
    let support: Vec<usize> = (0..sc.dim()).collect();
    AdjointStencil::new(sc, &support, domain, codomain).matrix(field, &x.coords)
}

/// Matrix over {0, 1} of the linear map `f -> f_n` from `A` (full basis,
/// columns) to `End(V_n)`, where `V_n` has basis the pairs `(slot j, path
/// v_j ~> n)`. Rows are the touched entries of `End(V_n)` only; untouched
/// entries are zero for every `f` and do not affect the rank.
pub fn vertex_restriction_matrix(quiver: &Quiver, slots: &SlotList, basis: &AlgebraBasis, n: usize) -> FqMatrix {
    let to_n: Vec<Vec<Path>> = (0..quiver.vertex_count())
        .map(|v| quiver.paths_between(v, n, 0))
        .collect();
    let mut row_index: HashMap<(usize, Vec<usize>, usize, Vec<usize>), usize> = HashMap::new();
    let mut cells = Vec::new();
    for (col, e) in basis.elements().iter().enumerate() {
        for c in &to_n[slots.vertex(e.j)] {
            let image = e.path.concat(c).expect("basis path ends where c starts");
            let key = (e.i, image.arrows, e.j, c.arrows.clone());
            let next = row_index.len();
            let row = *row_index.entry(key).or_insert(next);
            cells.push((row, col));
        }
    }
    let mut m = FqMatrix::zeros(row_index.len(), basis.dim());
    for (row, col) in cells {
        m.set(row, col, 1);
    }
    m
}
