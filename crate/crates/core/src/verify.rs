//! Randomized self-checks: rewrite invariance, the fibered count against the
//! naive oracle, the unitriangular class-number bridge, faithfulness of the
//! restriction to the sink, weakened-count triviality and cache re-checks.
//!
//! Each trial draws from its own ChaCha8 stream, so trial `k` is reproducible
//! from `(seed, k)` alone. A failing instance is shrunk greedily (drop a
//! vertex, drop an arrow, lower a summand value) while it keeps failing.

use std::fmt;
use std::path::PathBuf;
use std::str::FromStr;

use num_bigint::BigUint;
use num_traits::One;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::Value;

use crate::algebra::{build_basis, vertex_restriction_matrix};
use crate::cache::Cache;
use crate::count::{
    count_commuting, count_conjugacy_classes_un, count_mode, count_weakened, naive_pair_count, pow_q, CountOptions,
    Mode,
};
use crate::error::{Error, Result};
use crate::field::{nullity, FieldTable};
use crate::quiver::{parse_quiver, quiver_to_json, Arrow, Quiver, SummandVector};
use crate::reduce::{
    convert_sink, convert_source, merge_sinks, merge_sources, remove_zero_vertex, reverse_arrows, split_components,
    split_sink, split_source, Instance, Rule,
};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Suite {
    Ops,
    Oracle,
    Burnside,
    Injectivity,
    Weakened,
    Cache,
}

impl Suite {
    pub fn name(self) -> &'static str {
        match self {
            Suite::Ops => "ops",
            Suite::Oracle => "oracle",
            Suite::Burnside => "burnside",
            Suite::Injectivity => "injectivity",
            Suite::Weakened => "weakened",
            Suite::Cache => "cache",
        }
    }
}

impl fmt::Display for Suite {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Suite {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        [
            Suite::Ops,
            Suite::Oracle,
            Suite::Burnside,
            Suite::Injectivity,
            Suite::Weakened,
            Suite::Cache,
        ]
        .into_iter()
        .find(|x| x.name() == s)
        .ok_or_else(|| Error::Invalid(format!("unknown suite `{s}`")))
    }
}

#[derive(Clone, Debug)]
pub struct VerifyConfig {
    pub trials: usize,
    pub seed: u64,
    pub qs: Vec<u32>,
    pub opts: CountOptions,
    pub cache: Option<PathBuf>,
}

impl Default for VerifyConfig {
    fn default() -> Self {
        Self {
            trials: 50,
            seed: 0,
            qs: vec![2, 3],
            opts: CountOptions::default(),
            cache: None,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TrialOutcome {
    pub passed: bool,
    pub line: String,
}

#[derive(Clone, Debug, PartialEq)]
pub struct Reproducer {
    pub seed: u64,
    pub trial: usize,
    pub detail: String,
    pub quiver: Value,
}

#[derive(Clone, Debug, PartialEq)]
pub struct SuiteReport {
    pub suite: Suite,
    pub outcomes: Vec<TrialOutcome>,
    pub reproducer: Option<Reproducer>,
}

impl SuiteReport {
    pub fn passed(&self) -> bool {
        self.outcomes.iter().all(|o| o.passed)
    }

    pub fn pass_count(&self) -> usize {
        self.outcomes.iter().filter(|o| o.passed).count()
    }

    pub fn render(&self) -> String {
        let mut out = String::new();
        for o in &self.outcomes {
            out.push_str(&o.line);
            out.push('\n');
        }
        out.push_str(&format!(
            "suite {}: {}/{} passed\n",
            self.suite,
            self.pass_count(),
            self.outcomes.len()
        ));
        if let Some(r) = &self.reproducer {
            out.push_str(&format!(
                "minimized reproducer (seed {}, trial {}): {}\n  {}\n",
                r.seed, r.trial, r.detail, r.quiver
            ));
        }
        out
    }
}

pub fn run_suite(suite: Suite, cfg: &VerifyConfig) -> Result<SuiteReport> {
    if cfg.qs.is_empty() {
        return Err(Error::Invalid("verify needs at least one q".into()));
    }
    for &q in &cfg.qs {
        FieldTable::new(q)?;
    }
    match suite {
        Suite::Ops => Ok(ops_suite(cfg)),
        Suite::Oracle => Ok(oracle_suite(cfg)),
        Suite::Burnside => burnside_suite(cfg),
        Suite::Injectivity => Ok(injectivity_suite(cfg)),
        Suite::Weakened => Ok(weakened_suite(cfg)),
        Suite::Cache => cache_suite(cfg),
    }
}

fn trial_rng(seed: u64, trial: usize) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(trial as u64);
    rng
}

pub fn describe(inst: &Instance) -> String {
    let d: Vec<String> = inst.1.values().iter().map(u32::to_string).collect();
    format!("{} d=({})", inst.0.describe(), d.join(","))
}

fn names(n: usize) -> Vec<String> {
    (1..=n).map(|i| i.to_string()).collect()
}

/// Random acyclic quiver on `1..=max_n` vertices with entries of `d` up to
/// `max_d`, arrows oriented along a random vertex order, occasional parallel
/// arrows.
pub fn random_instance(rng: &mut ChaCha8Rng, max_n: usize, max_d: u32) -> Instance {
    let n = rng.gen_range(1..=max_n);
    let mut order: Vec<usize> = (0..n).collect();
    order.shuffle(rng);
    let mut rank = vec![0; n];
    for (k, &v) in order.iter().enumerate() {
        rank[v] = k;
    }
    let mut edges = Vec::new();
    for u in 0..n {
        for v in u + 1..n {
            if rng.gen_bool(0.45) {
                let (s, t) = if rank[u] < rank[v] { (u, v) } else { (v, u) };
                edges.push((s, t));
                if rng.gen_bool(0.1) {
                    edges.push((s, t));
                }
            }
        }
    }
    let d: Vec<u32> = (0..n).map(|_| rng.gen_range(0..=max_d)).collect();
    (build(n, &edges), SummandVector::new(d))
}

fn build(n: usize, edges: &[(usize, usize)]) -> Quiver {
    let arrows = edges
        .iter()
        .enumerate()
        .map(|(i, &(s, t))| Arrow {
            id: format!("a{i}"),
            source: s,
            target: t,
        })
        .collect();
    Quiver::new(names(n), arrows).expect("edges follow a topological order")
}

fn disjoint_union(a: &Instance, b: &Instance) -> Instance {
    let n = a.0.vertex_count();
    let mut edges: Vec<(usize, usize)> = a.0.arrows().iter().map(|x| (x.source, x.target)).collect();
    edges.extend(b.0.arrows().iter().map(|x| (x.source + n, x.target + n)));
    let mut d = a.1.values().to_vec();
    d.extend_from_slice(b.1.values());
    (build(n + b.0.vertex_count(), &edges), SummandVector::new(d))
}

fn rad_dim(inst: &Instance) -> u128 {
    inst.0.weighted_path_count(&inst.1, false)
}

/// Applies `rule` with parameters chosen by `pick(n)` (an index below `n`);
/// `None` when the rule has nothing to act on.
pub fn apply_rule(rule: Rule, inst: &Instance, pick: &mut dyn FnMut(usize) -> usize) -> Option<Result<Vec<Instance>>> {
    let (q, d) = inst;
    let n = q.vertex_count();
    let choose = |c: &[usize], pick: &mut dyn FnMut(usize) -> usize| -> Option<usize> {
        (!c.is_empty()).then(|| c[pick(c.len())])
    };
    let one = |r: Result<Instance>| Some(r.map(|x| vec![x]));
    match rule {
        Rule::ArrowReversal => Some(Ok(vec![reverse_arrows(q, d)])),
        Rule::ZeroVertexRemoval => {
            let c: Vec<usize> = (0..n).filter(|&v| d.get(v) == 0).collect();
            let v = choose(&c, pick)?;
            one(remove_zero_vertex(q, d, v))
        }
        Rule::ComponentSplit => {
            let parts = split_components(q, d);
            (parts.len() >= 2).then_some(Ok(parts))
        }
        Rule::SourceConversion | Rule::SinkConversion => {
            let sink = rule == Rule::SinkConversion;
            let c: Vec<usize> = (0..n).filter(|&v| if sink { q.is_sink(v) } else { q.is_source(v) }).collect();
            let v = choose(&c, pick)?;
            one(if sink { convert_sink(q, d, v) } else { convert_source(q, d, v) })
        }
        Rule::SourceSplit | Rule::SinkSplit => {
            let sink = rule == Rule::SinkSplit;
            let at = |v: usize| if sink { q.incoming(v) } else { q.outgoing(v) };
            let c: Vec<usize> = (0..n)
                .filter(|&v| (if sink { q.is_sink(v) } else { q.is_source(v) }) && at(v).len() >= 2)
                .collect();
            let v = choose(&c, pick)?;
            let arrows = at(v);
            // nonempty proper subsets as bit masks 1 ..= 2^k - 2
            let k = arrows.len().min(16);
            let mask = pick((1usize << k) - 2) + 1;
            let part: Vec<usize> = (0..k).filter(|b| mask >> b & 1 == 1).map(|b| arrows[b]).collect();
            one(if sink {
                split_sink(q, d, v, &part)
            } else {
                split_source(q, d, v, &part)
            })
        }
        Rule::SourceMerge | Rule::SinkMerge => {
            let sink = rule == Rule::SinkMerge;
            let ends: Vec<usize> = (0..n).filter(|&v| if sink { q.is_sink(v) } else { q.is_source(v) }).collect();
            let pairs: Vec<(usize, usize)> = ends
                .iter()
                .flat_map(|&u| ends.iter().filter(move |&&w| w > u).map(move |&w| (u, w)))
                .filter(|&(u, w)| d.get(u) == d.get(w))
                .collect();
            if pairs.is_empty() {
                return None;
            }
            let (u, w) = pairs[pick(pairs.len())];
            one(if sink { merge_sinks(q, d, u, w) } else { merge_sources(q, d, u, w) })
        }
    }
}

/// Random instance on which `rule` acts, with `dim rad <= 10`.
fn ops_instance(rule: Rule, rng: &mut ChaCha8Rng) -> Option<Instance> {
    for _ in 0..10_000 {
        let mut inst = random_instance(rng, 5, 2);
        match rule {
            Rule::ZeroVertexRemoval => {
                let v = rng.gen_range(0..inst.0.vertex_count());
                inst.1.set(v, 0);
            }
            Rule::ComponentSplit => {
                let other = random_instance(rng, 4, 2);
                if inst.0.vertex_count() + other.0.vertex_count() > 5 {
                    continue;
                }
                inst = disjoint_union(&inst, &other);
            }
            Rule::SourceMerge | Rule::SinkMerge => {
                let sink = rule == Rule::SinkMerge;
                let q = &inst.0;
                let ends: Vec<usize> = (0..q.vertex_count())
                    .filter(|&v| if sink { q.is_sink(v) } else { q.is_source(v) })
                    .collect();
                if ends.len() < 2 {
                    continue;
                }
                let value = inst.1.get(ends[0]);
                let w = ends[rng.gen_range(1..ends.len())];
                inst.1.set(w, value);
            }
            _ => {}
        }
        if rad_dim(&inst) > 10 {
            continue;
        }
        let mut probe = rng.clone();
        if apply_rule(rule, &inst, &mut |n| probe.gen_range(0..n)).is_some() {
            return Some(inst);
        }
    }
    None
}

fn product_count(parts: &[Instance], q: u32, opts: &CountOptions) -> Result<BigUint> {
    let mut v = BigUint::one();
    for (pq, pd) in parts {
        v *= count_commuting(pq, pd, q, opts)?.value;
    }
    Ok(v)
}

/// `None` when counts agree at every `q`; otherwise a description.
fn ops_mismatch(rule: Rule, inst: &Instance, pick: &mut dyn FnMut(usize) -> usize, cfg: &VerifyConfig) -> Option<String> {
    let after = match apply_rule(rule, inst, pick)? {
        Ok(a) => a,
        Err(e) => return Some(format!("rule failed: {e}")),
    };
    for &q in &cfg.qs {
        let before = match count_commuting(&inst.0, &inst.1, q, &cfg.opts) {
            Ok(r) => r.value,
            Err(e) => return Some(format!("count failed: {e}")),
        };
        match product_count(&after, q, &cfg.opts) {
            Ok(v) if v == before => {}
            Ok(v) => return Some(format!("q={q}: before {before}, after {v}")),
            Err(e) => return Some(format!("count failed: {e}")),
        }
    }
    None
}

/// Smaller variants: drop a vertex, drop an arrow, lower one summand value.
fn shrink_candidates(inst: &Instance) -> Vec<Instance> {
    let (q, d) = inst;
    let n = q.vertex_count();
    let mut out = Vec::new();
    if n > 1 {
        for v in 0..n {
            let keep: Vec<usize> = (0..n).filter(|&u| u != v).collect();
            out.push((q.induced(&keep), d.restrict(&keep)));
        }
    }
    for a in 0..q.arrow_count() {
        let arrows: Vec<Arrow> = q
            .arrows()
            .iter()
            .enumerate()
            .filter(|&(b, _)| b != a)
            .map(|(_, x)| x.clone())
            .collect();
        out.push((Quiver::new(q.vertices().to_vec(), arrows).expect("subquiver"), d.clone()));
    }
    for v in 0..n {
        if d.get(v) > 0 {
            let mut e = d.clone();
            e.set(v, d.get(v) - 1);
            out.push((q.clone(), e));
        }
    }
    out
}

pub fn shrink(mut inst: Instance, fails: impl Fn(&Instance) -> bool) -> Instance {
    'outer: loop {
        for c in shrink_candidates(&inst) {
            if fails(&c) {
                inst = c;
                continue 'outer;
            }
        }
        return inst;
    }
}

fn reproducer(cfg: &VerifyConfig, trial: usize, detail: String, inst: &Instance) -> Reproducer {
    Reproducer {
        seed: cfg.seed,
        trial,
        detail,
        quiver: quiver_to_json(&inst.0, &inst.1),
    }
}

fn outcome(trial: usize, desc: &str, failure: Option<&str>) -> TrialOutcome {
    TrialOutcome {
        passed: failure.is_none(),
        line: match failure {
            None => format!("trial {trial:>3}: {desc}: pass"),
            Some(f) => format!("trial {trial:>3}: {desc}: FAIL ({f})"),
        },
    }
}

fn ops_suite(cfg: &VerifyConfig) -> SuiteReport {
    let mut outcomes = Vec::new();
    let mut repro = None;
    for trial in 0..cfg.trials {
        let rule = Rule::ALL[trial % Rule::ALL.len()];
        let mut rng = trial_rng(cfg.seed, trial);
        let Some(inst) = ops_instance(rule, &mut rng) else {
            outcomes.push(outcome(trial, rule.name(), Some("no applicable instance found")));
            continue;
        };
        let mut pick_rng = rng.clone();
        let failure = ops_mismatch(rule, &inst, &mut |n| pick_rng.gen_range(0..n), cfg);
        let desc = format!("{rule} on {}", describe(&inst));
        if let (Some(f), None) = (&failure, &repro) {
            let small = shrink(inst.clone(), |c| ops_mismatch(rule, c, &mut |_| 0, cfg).is_some());
            let detail = ops_mismatch(rule, &small, &mut |_| 0, cfg).unwrap_or_else(|| f.clone());
            repro = Some(reproducer(cfg, trial, format!("{rule}: {detail}"), &small));
        }
        outcomes.push(outcome(trial, &desc, failure.as_deref()));
    }
    SuiteReport {
        suite: Suite::Ops,
        outcomes,
        reproducer: repro,
    }
}

fn oracle_mismatch(inst: &Instance, q: u32, cfg: &VerifyConfig) -> Option<String> {
    let run = || -> Result<Option<String>> {
        let fibered = count_commuting(&inst.0, &inst.1, q, &cfg.opts)?.value;
        let mut plain_opts = cfg.opts.clone();
        plain_opts.projective = false;
        let plain = count_commuting(&inst.0, &inst.1, q, &plain_opts)?.value;
        let mut naive_opts = cfg.opts.clone();
        naive_opts.budget = 1 << 20;
        let naive = naive_pair_count(&inst.0, &inst.1, Mode::Radical, q, &naive_opts)?.value;
        Ok(if fibered != naive {
            Some(format!("fibered {fibered}, naive {naive}"))
        } else if plain != fibered {
            Some(format!("projective {fibered}, full {plain}"))
        } else {
            None
        })
    };
    run().unwrap_or_else(|e| Some(e.to_string()))
}

fn oracle_suite(cfg: &VerifyConfig) -> SuiteReport {
    let mut outcomes = Vec::new();
    let mut repro = None;
    for trial in 0..cfg.trials {
        let q = cfg.qs[trial % cfg.qs.len()];
        let mut rng = trial_rng(cfg.seed, trial);
        // q^(2D) <= 2^20
        let max_dim = (20.0 / (2.0 * f64::from(q).log2())).floor() as u128;
        let inst = loop {
            let inst = random_instance(&mut rng, 4, 2);
            if rad_dim(&inst) <= max_dim {
                break inst;
            }
        };
        let failure = oracle_mismatch(&inst, q, cfg);
        let desc = format!("{} q={q}", describe(&inst));
        if let (Some(f), None) = (&failure, &repro) {
            let small = shrink(inst.clone(), |c| oracle_mismatch(c, q, cfg).is_some());
            let detail = oracle_mismatch(&small, q, cfg).unwrap_or_else(|| f.clone());
            repro = Some(reproducer(cfg, trial, format!("q={q}: {detail}"), &small));
        }
        outcomes.push(outcome(trial, &desc, failure.as_deref()));
    }
    SuiteReport {
        suite: Suite::Oracle,
        outcomes,
        reproducer: repro,
    }
}

fn burnside_suite(cfg: &VerifyConfig) -> Result<SuiteReport> {
    let mut qs: Vec<u32> = cfg.qs.iter().copied().filter(|q| *q == 2 || *q == 3).collect();
    if qs.is_empty() {
        qs = vec![2, 3];
    }
    let mut outcomes = Vec::new();
    let mut k = 0;
    for &q in &qs {
        for n in 1..=4usize {
            let a = Quiver::linear(n);
            let count = count_commuting(&a, &SummandVector::ones(n), q, &cfg.opts)?.value;
            let classes = count_conjugacy_classes_un(n, q)?;
            let scale = pow_q(q, n * (n - 1) / 2);
            let mut failure = None;
            if count != &classes * &scale {
                failure = Some(format!("count {count}, k(U_{n}) * q^{} = {}", n * (n - 1) / 2, &classes * &scale));
            } else if n == 3 && classes != BigUint::from(q * q + q - 1) {
                failure = Some(format!("k(U_3) = {classes}, expected q^2 + q - 1"));
            }
            let desc = format!("A{n} q={q}: count {count} = k(U_{n}) {classes} * q^{}", n * (n - 1) / 2);
            outcomes.push(outcome(k, &desc, failure.as_deref()));
            k += 1;
        }
    }
    Ok(SuiteReport {
        suite: Suite::Burnside,
        outcomes,
        reproducer: None,
    })
}

/// Random quiver on `1..n` with arrows `i -> j` only for `i < j` and `n` the
/// only sink.
pub fn random_single_sink(rng: &mut ChaCha8Rng, max_n: usize, max_d: u32) -> Instance {
    let n = rng.gen_range(1..=max_n);
    let mut edges = Vec::new();
    for i in 0..n.saturating_sub(1) {
        let forced = rng.gen_range(i + 1..n);
        for j in i + 1..n {
            if j == forced || rng.gen_bool(0.35) {
                edges.push((i, j));
            }
        }
    }
    let d: Vec<u32> = (0..n).map(|_| rng.gen_range(0..=max_d)).collect();
    (build(n, &edges), SummandVector::new(d))
}

fn injectivity_nullity(inst: &Instance, q: u32) -> Result<usize> {
    let field = FieldTable::new(q)?;
    let (slots, basis) = build_basis(&inst.0, &inst.1, true)?;
    let sink = inst.0.vertex_count() - 1;
    let m = vertex_restriction_matrix(&inst.0, &slots, &basis, sink);
    Ok(nullity(&field, &m))
}

fn injectivity_suite(cfg: &VerifyConfig) -> SuiteReport {
    let mut outcomes = Vec::new();
    let mut repro = None;
    for trial in 0..cfg.trials {
        let q = cfg.qs[trial % cfg.qs.len()];
        let mut rng = trial_rng(cfg.seed, trial);
        let inst = random_single_sink(&mut rng, 5, 2);
        let failure = match injectivity_nullity(&inst, q) {
            Ok(0) => None,
            Ok(k) => Some(format!("nullity {k}")),
            Err(e) => Some(e.to_string()),
        };
        let desc = format!("{} q={q}", describe(&inst));
        if let (Some(f), None) = (&failure, &repro) {
            repro = Some(reproducer(cfg, trial, f.clone(), &inst));
        }
        outcomes.push(outcome(trial, &desc, failure.as_deref()));
    }
    SuiteReport {
        suite: Suite::Injectivity,
        outcomes,
        reproducer: repro,
    }
}

fn weakened_mismatch(inst: &Instance, l: usize, m: usize, q: u32, cfg: &VerifyConfig) -> Option<String> {
    let run = || -> Result<Option<String>> {
        let value = count_weakened(&inst.0, &inst.1, l, m, q, &cfg.opts)?.value;
        let (_, basis) = build_basis(&inst.0, &inst.1, false)?;
        let expected = pow_q(q, 2 * basis.indices_with_len_at_least(l).len());
        Ok((value != expected).then(|| format!("count {value}, expected {expected}")))
    };
    run().unwrap_or_else(|e| Some(e.to_string()))
}

/// `m <= 2l` makes the weakened condition vacuous.
fn weakened_suite(cfg: &VerifyConfig) -> SuiteReport {
    let mut outcomes = Vec::new();
    let mut repro = None;
    for trial in 0..cfg.trials {
        let q = cfg.qs[trial % cfg.qs.len()];
        let mut rng = trial_rng(cfg.seed, trial);
        let inst = loop {
            let inst = random_instance(&mut rng, 5, 2);
            if rad_dim(&inst) <= 10 {
                break inst;
            }
        };
        let l = rng.gen_range(1..=2usize);
        let m = rng.gen_range(0..=2 * l);
        let failure = weakened_mismatch(&inst, l, m, q, cfg);
        let desc = format!("{} l={l} m={m} q={q}", describe(&inst));
        if let (Some(f), None) = (&failure, &repro) {
            let small = shrink(inst.clone(), |c| weakened_mismatch(c, l, m, q, cfg).is_some());
            repro = Some(reproducer(cfg, trial, f.clone(), &small));
        }
        outcomes.push(outcome(trial, &desc, failure.as_deref()));
    }
    SuiteReport {
        suite: Suite::Weakened,
        outcomes,
        reproducer: repro,
    }
}

/// Recomputes cached records (at most `trials` of them, oldest first).
fn cache_suite(cfg: &VerifyConfig) -> Result<SuiteReport> {
    let path = cfg
        .cache
        .clone()
        .ok_or_else(|| Error::Invalid("the cache suite needs a cache file (--cache or RADCOUNT_CACHE)".into()))?;
    let cache = Cache::open(&path)?;
    let mut outcomes = Vec::new();
    for (k, rec) in cache.records().iter().take(cfg.trials).enumerate() {
        let check = || -> Result<Option<String>> {
            let (q, d) = parse_quiver(&rec.quiver.to_string())?;
            let mode: Mode = rec.mode.parse()?;
            let value = count_mode(&q, &d, mode, rec.q, &cfg.opts)?.value;
            Ok((value.to_string() != rec.value).then(|| format!("cached {}, recomputed {value}", rec.value)))
        };
        let failure = check().unwrap_or_else(|e| Some(e.to_string()));
        outcomes.push(outcome(k, &rec.key, failure.as_deref()));
    }
    Ok(SuiteReport {
        suite: Suite::Cache,
        outcomes,
        reproducer: None,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cfg(trials: usize) -> VerifyConfig {
        VerifyConfig {
            trials,
            seed: 11,
            qs: vec![2, 3],
            opts: CountOptions::with_jobs(1),
            cache: None,
        }
    }

    #[test]
    fn random_instances_are_reproducible() {
        let a = random_instance(&mut trial_rng(5, 3), 5, 2);
        let b = random_instance(&mut trial_rng(5, 3), 5, 2);
        assert_eq!(a, b);
    }

    #[test]
    fn single_sink_shape() {
        let mut rng = trial_rng(1, 0);
        for _ in 0..50 {
            let (q, _) = random_single_sink(&mut rng, 5, 2);
            let n = q.vertex_count();
            assert!((0..n).filter(|&v| q.is_sink(v)).eq([n - 1]));
            assert!(q.arrows().iter().all(|a| a.source < a.target));
        }
    }

    #[test]
    fn every_rule_finds_instances() {
        let mut rng = trial_rng(2, 0);
        for rule in Rule::ALL {
            assert!(ops_instance(rule, &mut rng).is_some(), "{rule}");
        }
    }

    #[test]
    fn small_suites_pass() {
        for suite in [Suite::Ops, Suite::Oracle, Suite::Injectivity, Suite::Weakened] {
            let r = run_suite(suite, &cfg(9)).unwrap();
            assert!(r.passed(), "{}", r.render());
        }
    }

    #[test]
    fn shrinking_reaches_a_minimal_failure() {
        // pretend any instance with an arrow fails
        let (q, d) = random_instance(&mut trial_rng(9, 9), 5, 2);
        let edges = Quiver::from_edges(&["x", "y", "z"], &[("x", "y"), ("y", "z")]).unwrap();
        let start = if q.arrow_count() > 0 { (q, d) } else { (edges, SummandVector::ones(3)) };
        let small = shrink(start, |c| c.0.arrow_count() > 0);
        assert_eq!(small.0.vertex_count(), 2);
        assert_eq!(small.0.arrow_count(), 1);
        assert!(small.1.values().iter().all(|&x| x == 0));
    }

    #[test]
    fn suite_names_round_trip() {
        for s in ["ops", "oracle", "burnside", "injectivity", "weakened", "cache"] {
            assert_eq!(s.parse::<Suite>().unwrap().name(), s);
        }
        assert!("nope".parse::<Suite>().is_err());
    }
}
