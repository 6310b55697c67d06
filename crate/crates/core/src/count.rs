//! Exact counting of commuting pairs by enumeration.
//!
//! For a pair space `X x Y` and the commutator condition projected to a
//! codomain, the number of commuting pairs is `sum_{x in X} q^{nullity(ad_x)}`.
//! Since `ad_{cx} = c ad_x`, the sum is `q^{dim Y}` (for `x = 0`) plus `q - 1`
//! times the sum over vectors whose first nonzero coordinate is 1.

use std::fmt;
use std::sync::atomic::{AtomicBool, AtomicU64, Ordering};
use std::time::{Duration, Instant};

use num_bigint::BigUint;
use num_traits::{One, Zero};
use rayon::prelude::*;

use crate::algebra::{build_basis, AdjointStencil, StructureConstants};
use crate::error::{Error, Result};
use crate::field::FieldTable;
use crate::quiver::{Quiver, SummandVector};

pub const DEFAULT_BUDGET: u64 = 1 << 34;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Mode {
    /// Pairs in `rad A x rad A`.
    Radical,
    /// Pairs in `A x rad A`.
    Overline,
    /// Pairs in `rad^l x rad^l` commuting modulo `rad^m`.
    Weakened { l: usize, m: usize },
}

impl fmt::Display for Mode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Mode::Radical => f.write_str("radical"),
            Mode::Overline => f.write_str("overline"),
            Mode::Weakened { l, m } => write!(f, "weakened({l},{m})"),
        }
    }
}

impl std::str::FromStr for Mode {
    type Err = Error;

    /// Accepts the display forms `radical`, `overline` and `weakened(l,m)`.
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "radical" => Ok(Mode::Radical),
            "overline" => Ok(Mode::Overline),
            _ => {
                let inner = s
                    .strip_prefix("weakened(")
                    .and_then(|r| r.strip_suffix(')'))
                    .ok_or_else(|| Error::Invalid(format!("unknown mode `{s}`")))?;
                let (l, m) = inner
                    .split_once(',')
                    .ok_or_else(|| Error::Invalid(format!("unknown mode `{s}`")))?;
                let parse = |x: &str| x.trim().parse::<usize>().map_err(|_| Error::Invalid(format!("unknown mode `{s}`")));
                Ok(Mode::Weakened { l: parse(l)?, m: parse(m)? })
            }
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Engine {
    Brute,
    Dispatch,
    Naive,
}

impl fmt::Display for Engine {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Engine::Brute => "brute",
            Engine::Dispatch => "dispatch",
            Engine::Naive => "naive",
        })
    }
}

#[derive(Clone, Debug)]
pub struct CountOptions {
    pub jobs: usize,
    /// Largest number of enumerated vectors allowed.
    pub budget: u64,
    /// Enumerate projective representatives only.
    pub projective: bool,
    /// Report rate and ETA on stderr.
    pub progress: bool,
}

impl Default for CountOptions {
    fn default() -> Self {
        Self {
            jobs: std::thread::available_parallelism().map_or(1, |n| n.get()),
            budget: DEFAULT_BUDGET,
            projective: true,
            progress: false,
        }
    }
}

impl CountOptions {
    pub fn with_jobs(jobs: usize) -> Self {
        Self {
            jobs: jobs.max(1),
            ..Self::default()
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct CountResult {
    pub value: BigUint,
    pub q: u32,
    /// Dimension of the space whose vectors were enumerated.
    pub dim_enumerated: usize,
    pub mode: Mode,
    pub engine: Engine,
    pub elapsed: f64,
}

/// The linear data of one counting problem: the stencil of `ad_x` for `x` in
/// the enumerated space, acting from the y-space to the codomain.
#[derive(Clone, Debug)]
pub struct CountProblem {
    pub mode: Mode,
    sc: StructureConstants,
    x_support: Vec<usize>,
    domain: Vec<usize>,
    codomain: Vec<usize>,
    stencil: AdjointStencil,
}

impl CountProblem {
    pub fn new(quiver: &Quiver, d: &SummandVector, mode: Mode) -> Result<Self> {
        let (basis, x_support, domain, codomain) = match mode {
            Mode::Radical => {
                let (_, b) = build_basis(quiver, d, false)?;
                let all: Vec<usize> = (0..b.dim()).collect();
                (b, all.clone(), all.clone(), all)
            }
            Mode::Overline => {
                let (_, b) = build_basis(quiver, d, true)?;
                let rad = b.indices_with_len_at_least(1);
                let all: Vec<usize> = (0..b.dim()).collect();
                (b, rad, all.clone(), all)
            }
            Mode::Weakened { l, m } => {
                if l == 0 {
                    return Err(Error::Invalid("weakened mode needs l >= 1".into()));
                }
                let (_, b) = build_basis(quiver, d, false)?;
                let power = b.indices_with_len_at_least(l);
                let below = b.indices_with_len_below(m);
                (b, power.clone(), power, below)
            }
        };
        let sc = StructureConstants::new(&basis);
        let stencil = AdjointStencil::new(&sc, &x_support, &domain, &codomain);
        Ok(Self {
            mode,
            sc,
            x_support,
            domain,
            codomain,
            stencil,
        })
    }

    /// Dimension of the enumerated x-space.
    pub fn x_dim(&self) -> usize {
        self.x_support.len()
    }

    pub fn y_dim(&self) -> usize {
        self.domain.len()
    }

    /// Dimension of the pair space `X x Y`.
    pub fn pair_dim(&self) -> usize {
        self.x_dim() + self.y_dim()
    }

    /// Some pair of basis elements fails the commutator condition.
    pub fn has_noncommuting_basis_pair(&self) -> bool {
        !self.stencil.is_zero()
    }

    pub fn stencil(&self) -> &AdjointStencil {
        &self.stencil
    }

    pub fn structure_constants(&self) -> &StructureConstants {
        &self.sc
    }
}

fn big_pow(q: u32, e: usize) -> BigUint {
    num_traits::pow(BigUint::from(q), e)
}

/// `q^e` if it does not exceed `budget`.
fn within_budget(q: u32, e: usize, budget: u64) -> Result<u64> {
    let total = big_pow(q, e);
    match u64::try_from(&total) {
        Ok(n) if n <= budget => Ok(n),
        _ => Err(Error::Budget {
            q,
            dim: e,
            required: total.to_string(),
            budget,
        }),
    }
}

/// Counts pairs in `X x Y` with `ad_x(y) = 0` by fibering over `x`.
pub fn count_problem(problem: &CountProblem, q: u32, opts: &CountOptions) -> Result<CountResult> {
    let start = Instant::now();
    let field = FieldTable::new(q)?;
    let dx = problem.x_dim();
    let dy = problem.y_dim();
    if problem.stencil.is_zero() {
        // every pair commutes
        return Ok(CountResult {
            value: big_pow(q, dx + dy),
            q,
            dim_enumerated: dx,
            mode: problem.mode,
            engine: Engine::Brute,
            elapsed: start.elapsed().as_secs_f64(),
        });
    }
    within_budget(q, dx, opts.budget)?;
    let hist = nullity_histogram(&problem.stencil, &field, opts);
    let mut value = BigUint::zero();
    for (k, &n) in hist.iter().enumerate() {
        if n != 0 {
            value += BigUint::from(n) * big_pow(q, k);
        }
    }
    if opts.projective {
        value = value * BigUint::from(q - 1) + big_pow(q, dy);
    }
    Ok(CountResult {
        value,
        q,
        dim_enumerated: dx,
        mode: problem.mode,
        engine: Engine::Brute,
        elapsed: start.elapsed().as_secs_f64(),
    })
}

/// Layout of the enumeration as a linear index range.
struct Layout {
    q: u64,
    dim: usize,
    projective: bool,
    /// Projective mode: block `k` holds vectors with leading 1 at `k`; its
    /// first linear index is `offsets[k]`.
    offsets: Vec<u64>,
    total: u64,
}

impl Layout {
    fn new(q: u32, dim: usize, projective: bool) -> Self {
        let q = u64::from(q);
        let mut offsets = Vec::with_capacity(dim + 1);
        let total = if projective {
            let mut acc = 0u64;
            for k in 0..dim {
                offsets.push(acc);
                acc += q.pow((dim - 1 - k) as u32);
            }
            offsets.push(acc);
            acc
        } else {
            q.pow(dim as u32)
        };
        Self {
            q,
            dim,
            projective,
            offsets,
            total,
        }
    }

    /// Writes the vector at linear index `idx` into `x`.
    fn decode(&self, idx: u64, x: &mut [u8]) {
        x.fill(0);
        let (mut rest, first) = if self.projective {
            let k = self.offsets.partition_point(|&o| o <= idx) - 1;
            x[k] = 1;
            (idx - self.offsets[k], k + 1)
        } else {
            (idx, 0)
        };
        for c in x.iter_mut().take(self.dim).skip(first) {
            *c = (rest % self.q) as u8;
            rest /= self.q;
        }
    }

    /// Advances `x` to the next vector in enumeration order; returns false
    /// when it wraps past the last one.
    fn advance(&self, x: &mut [u8]) -> bool {
        let first = if self.projective {
            let k = x.iter().position(|&c| c != 0).expect("projective vectors are nonzero");
            k + 1
        } else {
            0
        };
        for c in x.iter_mut().skip(first) {
            if u64::from(*c) + 1 < self.q {
                *c += 1;
                return true;
            }
            *c = 0;
        }
        if self.projective && first <= self.dim {
            // move the leading 1 one step right
            let k = first - 1;
            x[k] = 0;
            if k + 1 < self.dim {
                x[k + 1] = 1;
                return true;
            }
        }
        false
    }
}

fn nullity_histogram(stencil: &AdjointStencil, field: &FieldTable, opts: &CountOptions) -> Vec<u64> {
    let layout = Layout::new(field.q(), stencil.x_dim(), opts.projective);
    let cols = stencil.cols();
    let rows = stencil.rows();
    let total = layout.total;
    let jobs = opts.jobs.max(1);
    let chunk = (total / (jobs as u64 * 64)).clamp(1, 1 << 16);
    let chunks = total.div_ceil(chunk);
    let done = AtomicU64::new(0);
    let finished = AtomicBool::new(false);

    let work = || {
        (0..chunks)
            .into_par_iter()
            .map(|c| {
                let lo = c * chunk;
                let hi = (lo + chunk).min(total);
                let mut hist = vec![0u64; cols + 1];
                let mut x = vec![0u8; layout.dim];
                let mut m = vec![0u8; rows * cols];
                layout.decode(lo, &mut x);
                for idx in lo..hi {
                    stencil.fill(field, &x, &mut m);
                    let rank = field.rank_in_place(&mut m, rows, cols);
                    hist[cols - rank] += 1;
                    if idx + 1 < hi {
                        layout.advance(&mut x);
                    }
                }
                done.fetch_add(hi - lo, Ordering::Relaxed);
                hist
            })
            .reduce(
                || vec![0u64; cols + 1],
                |mut a, b| {
                    for (s, t) in a.iter_mut().zip(b) {
                        *s += t;
                    }
                    a
                },
            )
    };

    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(jobs)
        .build()
        .expect("thread pool");
    std::thread::scope(|scope| {
        if opts.progress {
            scope.spawn(|| report_progress(&done, &finished, total));
        }
        let hist = pool.install(work);
        finished.store(true, Ordering::Relaxed);
        hist
    })
}

fn report_progress(done: &AtomicU64, finished: &AtomicBool, total: u64) {
    let start = Instant::now();
    let mut last = Instant::now();
    while !finished.load(Ordering::Relaxed) {
        std::thread::sleep(Duration::from_millis(50));
        if last.elapsed() < Duration::from_secs(1) {
            continue;
        }
        last = Instant::now();
        let n = done.load(Ordering::Relaxed);
        let secs = start.elapsed().as_secs_f64().max(1e-9);
        let rate = n as f64 / secs;
        let eta = if rate > 0.0 { (total - n) as f64 / rate } else { 0.0 };
        eprintln!(
            "progress: {n}/{total} vectors ({}%), {} per second, eta {}s",
            n * 100 / total.max(1),
            rate as u64,
            eta.ceil() as u64
        );
    }
}

/// `[Q, d]`: commuting pairs in `rad A x rad A`.
pub fn count_commuting(quiver: &Quiver, d: &SummandVector, q: u32, opts: &CountOptions) -> Result<CountResult> {
    count_mode(quiver, d, Mode::Radical, q, opts)
}

/// Commuting pairs in `A x rad A`.
pub fn count_overline(quiver: &Quiver, d: &SummandVector, q: u32, opts: &CountOptions) -> Result<CountResult> {
    count_mode(quiver, d, Mode::Overline, q, opts)
}

/// Pairs in `rad^l x rad^l` whose commutator lies in `rad^m`.
pub fn count_weakened(
    quiver: &Quiver,
    d: &SummandVector,
    l: usize,
    m: usize,
    q: u32,
    opts: &CountOptions,
) -> Result<CountResult> {
    count_mode(quiver, d, Mode::Weakened { l, m }, q, opts)
}

pub fn count_mode(quiver: &Quiver, d: &SummandVector, mode: Mode, q: u32, opts: &CountOptions) -> Result<CountResult> {
    FieldTable::new(q)?;
    let problem = CountProblem::new(quiver, d, mode)?;
    count_problem(&problem, q, opts)
}

/// Enumerates every pair and tests the commutator directly against the
/// multiplication table. Only for tiny instances.
pub fn naive_pair_count(
    quiver: &Quiver,
    d: &SummandVector,
    mode: Mode,
    q: u32,
    opts: &CountOptions,
) -> Result<CountResult> {
    let start = Instant::now();
    let field = FieldTable::new(q)?;
    let problem = CountProblem::new(quiver, d, mode)?;
    let (dx, dy) = (problem.x_dim(), problem.y_dim());
    within_budget(q, dx + dy, opts.budget)?;
    let nx = u64::from(q).pow(dx as u32);
    let ny = u64::from(q).pow(dy as u32);
    let dim = problem.sc.dim();
    let spread = |idx: u64, support: &[usize]| -> Vec<u8> {
        let mut v = vec![0u8; dim];
        let mut rest = idx;
        for &a in support {
            v[a] = (rest % u64::from(q)) as u8;
            rest /= u64::from(q);
        }
        v
    };
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(opts.jobs.max(1))
        .build()
        .expect("thread pool");
    let total: u64 = pool.install(|| {
        (0..nx)
            .into_par_iter()
            .map(|xi| {
                let x = spread(xi, &problem.x_support);
                (0..ny)
                    .filter(|&yi| {
                        let y = spread(yi, &problem.domain);
                        let c = problem.sc.commutator(&field, &x, &y);
                        problem.codomain.iter().all(|&k| c[k] == 0)
                    })
                    .count() as u64
            })
            .sum()
    });
    Ok(CountResult {
        value: BigUint::from(total),
        q,
        dim_enumerated: dx + dy,
        mode,
        engine: Engine::Naive,
        elapsed: start.elapsed().as_secs_f64(),
    })
}

/// Number of conjugacy classes of the unitriangular group `U_n(F_q)`, by
/// explicit orbit enumeration. Supports `1 <= n <= 5` and `q` in {2, 3}.
pub fn count_conjugacy_classes_un(n: usize, q: u32) -> Result<BigUint> {
    if !(1..=5).contains(&n) || !(q == 2 || q == 3) {
        return Err(Error::Invalid(format!(
            "conjugacy class oracle supports 1 <= n <= 5 and q in {{2, 3}}, got n = {n}, q = {q}"
        )));
    }
    let q = q as usize;
    // strictly upper entries in row-major order
    let cells: Vec<(usize, usize)> = (0..n).flat_map(|i| (i + 1..n).map(move |j| (i, j))).collect();
    let size = q.pow(cells.len() as u32);
    let decode = |mut idx: usize| -> Vec<Vec<usize>> {
        let mut m = vec![vec![0usize; n]; n];
        for (i, row) in m.iter_mut().enumerate() {
            row[i] = 1;
        }
        for &(i, j) in &cells {
            m[i][j] = idx % q;
            idx /= q;
        }
        m
    };
    let encode = |m: &[Vec<usize>]| -> usize { cells.iter().rev().fold(0, |acc, &(i, j)| acc * q + m[i][j]) };
    let mul = |a: &[Vec<usize>], b: &[Vec<usize>]| -> Vec<Vec<usize>> {
        (0..n)
            .map(|i| (0..n).map(|j| (0..n).map(|k| a[i][k] * b[k][j]).sum::<usize>() % q).collect())
            .collect()
    };
    // generators I + E_{i,i+1} and their inverses I - E_{i,i+1}
    type Mat = Vec<Vec<usize>>;
    let gens: Vec<(Mat, Mat)> = (0..n.saturating_sub(1))
        .map(|i| {
            let mut g = decode(0);
            let mut h = decode(0);
            g[i][i + 1] = 1;
            h[i][i + 1] = q - 1;
            (g, h)
        })
        .collect();
    let mut seen = vec![false; size];
    let mut classes = 0u64;
    let mut stack = Vec::new();
    for root in 0..size {
        if seen[root] {
            continue;
        }
        classes += 1;
        seen[root] = true;
        stack.push(root);
        while let Some(idx) = stack.pop() {
            let x = decode(idx);
            for (g, h) in &gens {
                let y = encode(&mul(&mul(g, &x), h));
                if !seen[y] {
                    seen[y] = true;
                    stack.push(y);
                }
            }
        }
    }
    Ok(BigUint::from(classes))
}

/// `q^e` as a big integer.
pub fn pow_q(q: u32, e: usize) -> BigUint {
    if e == 0 {
        BigUint::one()
    } else {
        big_pow(q, e)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn a(n: usize) -> Quiver {
        Quiver::linear(n)
    }

    fn opts() -> CountOptions {
        CountOptions::with_jobs(2)
    }

    fn value(r: Result<CountResult>) -> u64 {
        u64::try_from(r.unwrap().value).unwrap()
    }

    #[test]
    fn single_vertex_counts_one() {
        let q = Quiver::from_edges(&["v"], &[]).unwrap();
        for d in [0, 1, 5] {
            assert_eq!(value(count_commuting(&q, &SummandVector::new(vec![d]), 3, &opts())), 1);
        }
    }

    #[test]
    fn a2_is_q_squared() {
        for q in [2, 3, 5] {
            assert_eq!(value(count_commuting(&a(2), &SummandVector::ones(2), q, &opts())), u64::from(q * q));
        }
    }

    #[test]
    fn a3_at_two() {
        let d = SummandVector::ones(3);
        assert_eq!(value(count_commuting(&a(3), &d, 2, &opts())), 40);
        assert_eq!(value(naive_pair_count(&a(3), &d, Mode::Radical, 2, &opts())), 40);
    }

    #[test]
    fn projective_switch_is_value_neutral() {
        let d = SummandVector::new(vec![1, 2, 1]);
        let mut plain = opts();
        plain.projective = false;
        for q in [2, 3] {
            assert_eq!(
                count_commuting(&a(3), &d, q, &opts()).unwrap().value,
                count_commuting(&a(3), &d, q, &plain).unwrap().value
            );
        }
    }

    #[test]
    fn layout_visits_every_vector_once() {
        for projective in [false, true] {
            let layout = Layout::new(3, 4, projective);
            let mut x = vec![0u8; 4];
            layout.decode(0, &mut x);
            let mut seen = std::collections::HashSet::new();
            for idx in 0..layout.total {
                let mut y = vec![0u8; 4];
                layout.decode(idx, &mut y);
                assert_eq!(x, y, "odometer and decode disagree at {idx}");
                assert!(seen.insert(x.clone()));
                let more = layout.advance(&mut x);
                assert_eq!(more, idx + 1 < layout.total);
            }
            assert_eq!(seen.len() as u64, if projective { 40 } else { 81 });
        }
    }

    #[test]
    fn overline_examples() {
        let point = Quiver::from_edges(&["v"], &[]).unwrap();
        for q in [2, 3, 7] {
            assert_eq!(value(count_overline(&point, &SummandVector::ones(1), q, &opts())), u64::from(q));
            // A2: 2q^3 - q^2
            let v = value(count_overline(&a(2), &SummandVector::ones(2), q, &opts()));
            assert_eq!(v, 2 * u64::from(q).pow(3) - u64::from(q).pow(2));
        }
        assert_eq!(value(count_overline(&a(3), &SummandVector::new(vec![0, 0, 0]), 2, &opts())), 1);
        let nv = naive_pair_count(&a(2), &SummandVector::ones(2), Mode::Overline, 2, &opts()).unwrap();
        assert_eq!(nv.value, BigUint::from(12u32));
    }

    #[test]
    fn weakened_examples() {
        let d = SummandVector::ones(3);
        assert_eq!(value(count_weakened(&a(3), &d, 1, 2, 2, &opts())), 64);
        assert_eq!(
            count_weakened(&a(3), &d, 1, 3, 3, &opts()).unwrap().value,
            count_commuting(&a(3), &d, 3, &opts()).unwrap().value
        );
        assert!(count_weakened(&a(3), &d, 0, 2, 2, &opts()).is_err());
    }

    #[test]
    fn budget_is_reported() {
        let d = SummandVector::new(vec![2, 2, 2]);
        let mut small = opts();
        small.budget = 100;
        match count_commuting(&a(3), &d, 2, &small) {
            Err(Error::Budget { required, dim, .. }) => {
                assert_eq!(dim, 12);
                assert_eq!(required, "4096");
            }
            other => panic!("expected a budget error, got {other:?}"),
        }
    }

    #[test]
    fn unitriangular_classes() {
        let k = |n, q| u64::try_from(count_conjugacy_classes_un(n, q).unwrap()).unwrap();
        assert_eq!(k(1, 2), 1);
        assert_eq!(k(2, 2), 2);
        assert_eq!(k(2, 3), 3);
        assert_eq!(k(3, 2), 5);
        assert_eq!(k(3, 3), 11);
        assert_eq!(k(4, 2), 16);
        assert_eq!(k(4, 3), 57);
        assert!(count_conjugacy_classes_un(6, 2).is_err());
        assert!(count_conjugacy_classes_un(3, 5).is_err());
    }
}
