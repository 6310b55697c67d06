//! Interpolating counts as polynomials in `q` and checking the fits.

use std::fmt::Write as _;

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::One;
use serde_json::{json, Value};

use crate::closed_form::PolyQ;
use crate::count::{count_mode, CountOptions, CountProblem, Engine, Mode};
use crate::error::{Error, Result};
use crate::field::is_supported;
use crate::quiver::{Quiver, SummandVector};
use crate::reduce::dispatch_count;

#[derive(Clone, Debug, PartialEq)]
pub struct SampleSet {
    /// `(q, count)` sorted by `q`.
    pub points: Vec<(u32, BigUint)>,
    pub source: Engine,
}

impl SampleSet {
    pub fn new(mut points: Vec<(u32, BigUint)>, source: Engine) -> Result<Self> {
        points.sort_by_key(|p| p.0);
        if let Some(w) = points.windows(2).find(|w| w[0].0 == w[1].0) {
            return Err(Error::Invalid(format!("sample q = {} appears twice", w[0].0)));
        }
        if let Some(&(q, _)) = points.iter().find(|p| !is_supported(p.0)) {
            return Err(Error::UnsupportedField(q));
        }
        Ok(Self { points, source })
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Holdout {
    pub q: u32,
    pub predicted: BigRational,
    pub actual: BigUint,
}

impl Holdout {
    pub fn matches(&self) -> bool {
        self.predicted == BigRational::from_integer(BigInt::from(self.actual.clone()))
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct FitReport {
    pub mode: Mode,
    pub degree_bound: usize,
    pub samples: SampleSet,
    /// Interpolant through the first `degree_bound + 1` samples.
    pub candidate: PolyQ,
    pub holdout: Vec<Holdout>,
}

impl FitReport {
    /// The fitted polynomial, present when every held-out sample matches.
    pub fn poly(&self) -> Option<&PolyQ> {
        self.holdout.iter().all(Holdout::matches).then_some(&self.candidate)
    }

    pub fn nonneg(&self) -> bool {
        self.candidate.has_nonnegative_coefficients()
    }

    pub fn integer(&self) -> bool {
        self.candidate.has_integer_coefficients()
    }

    pub fn render(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "mode: {}", self.mode);
        let _ = writeln!(out, "degree bound: {}", self.degree_bound);
        let _ = writeln!(out, "samples ({}):", self.samples.source);
        for (q, v) in &self.samples.points {
            let _ = writeln!(out, "  q={q:<3} {v}");
        }
        match self.poly() {
            Some(p) => {
                let _ = writeln!(out, "polynomial: {p}");
            }
            None => {
                let _ = writeln!(out, "polynomial: NO FIT (interpolant {} fails a held-out sample)", self.candidate);
            }
        }
        let _ = writeln!(out, "holdout:");
        for h in &self.holdout {
            let verdict = if h.matches() { "ok" } else { "MISMATCH" };
            let _ = writeln!(out, "  q={:<3} predicted {} actual {} {verdict}", h.q, h.predicted, h.actual);
        }
        if self.poly().is_some() {
            let _ = writeln!(out, "integer coefficients: {}", yes_no(self.integer()));
            let _ = writeln!(out, "nonnegative coefficients: {}", yes_no(self.nonneg()));
        }
        out
    }

    pub fn to_json(&self) -> Value {
        json!({
            "mode": self.mode.to_string(),
            "degree_bound": self.degree_bound,
            "samples": self.samples.points.iter()
                .map(|(q, v)| json!({ "q": q, "value": v.to_string() }))
                .collect::<Vec<_>>(),
            "polynomial": self.poly().map(PolyQ::to_json),
            "polynomial_ascii": self.poly().map(|p| p.to_string()),
            "holdout": self.holdout.iter()
                .map(|h| json!({
                    "q": h.q,
                    "predicted": h.predicted.to_string(),
                    "actual": h.actual.to_string(),
                    "match": h.matches(),
                }))
                .collect::<Vec<_>>(),
            "nonneg": self.poly().map(|p| p.has_nonnegative_coefficients()),
            "integer": self.poly().map(|p| p.has_integer_coefficients()),
        })
    }
}

fn yes_no(b: bool) -> &'static str {
    if b {
        "yes"
    } else {
        "no"
    }
}

/// Dimension of the pair space counted by `mode`: `2 dim rad`,
/// `dim A + dim rad`, or `2 dim rad^l`.
pub fn pair_space_dim(q: &Quiver, d: &SummandVector, mode: Mode) -> Result<usize> {
    Ok(CountProblem::new(q, d, mode)?.pair_dim())
}

/// Upper bound on the degree of the count as a polynomial in `q`. The count
/// is at most `q^N` for the pair-space dimension `N`. When some pair of basis
/// elements fails the condition, the `x` with `ad_x = 0` form a proper
/// subspace and the count is at most `2 q^(N-1)`, so the degree is at most
/// `N - 1`.
pub fn degree_bound(q: &Quiver, d: &SummandVector, mode: Mode) -> Result<usize> {
    let problem = CountProblem::new(q, d, mode)?;
    let n = problem.pair_dim();
    Ok(if problem.has_noncommuting_basis_pair() { n - 1 } else { n })
}

/// Lagrange interpolant through `points`, exactly.
pub fn lagrange(points: &[(u32, BigUint)]) -> PolyQ {
    let mut total = PolyQ::zero();
    for (i, (xi, yi)) in points.iter().enumerate() {
        let mut basis = PolyQ::one();
        let mut denom = BigInt::one();
        for (j, (xj, _)) in points.iter().enumerate() {
            if i != j {
                basis = &basis * &(&PolyQ::q_pow(1) - &PolyQ::from_int(i64::from(*xj)));
                denom *= i64::from(*xi) - i64::from(*xj);
            }
        }
        let scale = BigRational::new(BigInt::from(yi.clone()), denom);
        total = &total + &basis.scale(&scale);
    }
    total
}

/// Fits the first `bound + 1` samples (ascending `q`) and checks the rest.
pub fn interpolate(samples: &SampleSet, bound: usize, mode: Mode) -> Result<FitReport> {
    let need = bound + 2;
    if samples.len() < need {
        return Err(Error::InsufficientSamples {
            need,
            have: samples.len(),
        });
    }
    let (fit, rest) = samples.points.split_at(bound + 1);
    let candidate = lagrange(fit);
    let holdout = rest
        .iter()
        .map(|(q, v)| Holdout {
            q: *q,
            predicted: candidate.eval_int(u64::from(*q)),
            actual: v.clone(),
        })
        .collect();
    Ok(FitReport {
        mode,
        degree_bound: bound,
        samples: samples.clone(),
        candidate,
        holdout,
    })
}

/// Counts at each `q`. `Engine::Dispatch` applies to radical mode only.
pub fn sample(
    quiver: &Quiver,
    d: &SummandVector,
    mode: Mode,
    qs: &[u32],
    engine: Engine,
    opts: &CountOptions,
) -> Result<SampleSet> {
    let mut points = Vec::with_capacity(qs.len());
    for &q in qs {
        let r = match engine {
            Engine::Dispatch if mode == Mode::Radical => dispatch_count(quiver, d, q, opts)?,
            Engine::Brute => count_mode(quiver, d, mode, q, opts)?,
            _ => return Err(Error::Invalid(format!("engine {engine} cannot sample {mode} counts"))),
        };
        points.push((q, r.value));
    }
    SampleSet::new(points, engine)
}

/// Degree bound, samples and fit for one mode.
pub fn fit_counts(
    quiver: &Quiver,
    d: &SummandVector,
    mode: Mode,
    qs: &[u32],
    engine: Engine,
    opts: &CountOptions,
) -> Result<FitReport> {
    let bound = degree_bound(quiver, d, mode)?;
    let mut sorted = qs.to_vec();
    sorted.sort_unstable();
    sorted.dedup();
    if sorted.len() < bound + 2 {
        return Err(Error::InsufficientSamples {
            need: bound + 2,
            have: sorted.len(),
        });
    }
    let samples = sample(quiver, d, mode, &sorted, engine, opts)?;
    interpolate(&samples, bound, mode)
}

#[derive(Clone, Debug)]
pub struct ScreenReport {
    pub radical: FitReport,
    pub overline: FitReport,
}

impl ScreenReport {
    pub fn render(&self) -> String {
        let mut out = String::new();
        for (label, fit) in [("radical", &self.radical), ("overline", &self.overline)] {
            match fit.poly() {
                Some(p) => {
                    let _ = write!(out, "{label}: {p}");
                    if label == "overline" {
                        let _ = write!(out, "  [nonnegative: {}]", yes_no(p.has_nonnegative_coefficients()));
                    }
                    if !p.has_integer_coefficients() {
                        let _ = write!(out, "  [WARNING: non-integer coefficients]");
                    }
                    out.push('\n');
                }
                None => {
                    let _ = writeln!(
                        out,
                        "{label}: NO FIT. The held-out counts disagree with the interpolant {}. \
                         This would be evidence against polynomiality at this size, but is more \
                         likely a bug.",
                        fit.candidate
                    );
                }
            }
        }
        out
    }

    pub fn to_json(&self) -> Value {
        json!({ "radical": self.radical.to_json(), "overline": self.overline.to_json() })
    }
}

/// Fits both the radical and the overline counts on `qs`.
pub fn screen_conjectures(quiver: &Quiver, d: &SummandVector, qs: &[u32], opts: &CountOptions) -> Result<ScreenReport> {
    Ok(ScreenReport {
        radical: fit_counts(quiver, d, Mode::Radical, qs, Engine::Brute, opts)?,
        overline: fit_counts(quiver, d, Mode::Overline, qs, Engine::Brute, opts)?,
    })
}

/// The smallest `n` supported field sizes.
pub fn smallest_qs(n: usize) -> Vec<u32> {
    crate::field::SUPPORTED_Q.iter().copied().take(n).collect()
}
