//! Count-preserving rewrites of `(Q, d)` and a terminating normalization
//! strategy that reduces a quiver to leaves with known counts.

use std::collections::{HashMap, HashSet};
use std::fmt;
use std::time::Instant;

use num_bigint::BigUint;
use num_traits::One;
use serde_json::{json, Value};

use crate::closed_form::{base_count_poly, eval_at, Classification};
use crate::count::{count_commuting, CountOptions, CountResult, Engine, Mode};
use crate::error::{Error, Result};
use crate::quiver::{fresh, quiver_to_json, Arrow, Quiver, SummandVector};

pub type Instance = (Quiver, SummandVector);

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Rule {
    ArrowReversal,
    ZeroVertexRemoval,
    ComponentSplit,
    SourceConversion,
    SinkConversion,
    SourceSplit,
    SinkSplit,
    SourceMerge,
    SinkMerge,
}

impl Rule {
    pub const ALL: [Rule; 9] = [
        Rule::ArrowReversal,
        Rule::ZeroVertexRemoval,
        Rule::ComponentSplit,
        Rule::SourceConversion,
        Rule::SinkConversion,
        Rule::SourceSplit,
        Rule::SinkSplit,
        Rule::SourceMerge,
        Rule::SinkMerge,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Rule::ArrowReversal => "arrow-reversal",
            Rule::ZeroVertexRemoval => "zero-vertex-removal",
            Rule::ComponentSplit => "component-split",
            Rule::SourceConversion => "source-conversion",
            Rule::SinkConversion => "sink-conversion",
            Rule::SourceSplit => "source-split",
            Rule::SinkSplit => "sink-split",
            Rule::SourceMerge => "source-merge",
            Rule::SinkMerge => "sink-merge",
        }
    }
}

impl fmt::Display for Rule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Clone, Debug)]
pub struct ReductionStep {
    pub rule: Rule,
    pub before: Instance,
    pub after: Vec<Instance>,
    pub detail: String,
}

#[derive(Clone, Debug)]
pub struct Leaf {
    pub quiver: Quiver,
    pub d: SummandVector,
    pub class: Classification,
}

impl Leaf {
    pub fn label(&self) -> String {
        match self.class {
            Classification::Point => "point".into(),
            Classification::RadSquareZero { dim } => {
                if self.quiver.vertex_count() == 2 && self.quiver.arrow_count() == 1 && dim == 1 {
                    "rad-square-zero(A2)".into()
                } else {
                    format!("rad-square-zero(dim={dim})")
                }
            }
            Classification::A3 { l, d, m } => format!("a3-shape({l},{d},{m})"),
            Classification::Irreducible => "irreducible".into(),
        }
    }
}

#[derive(Clone, Debug, Default)]
pub struct ReductionTrace {
    pub steps: Vec<ReductionStep>,
    pub leaves: Vec<Leaf>,
}

impl ReductionTrace {
    /// Leaf labels grouped by first appearance, e.g. `4 × rad-square-zero(A2)`.
    pub fn summary(&self) -> String {
        let mut order: Vec<String> = Vec::new();
        let mut counts: HashMap<String, usize> = HashMap::new();
        for leaf in &self.leaves {
            let label = leaf.label();
            let n = counts.entry(label.clone()).or_insert(0);
            if *n == 0 {
                order.push(label);
            }
            *n += 1;
        }
        if order.is_empty() {
            return "point".into();
        }
        order
            .into_iter()
            .map(|label| match counts[&label] {
                1 => label,
                n => format!("{n} × {label}"),
            })
            .collect::<Vec<_>>()
            .join(", ")
    }

    /// Numbered list of rule applications with before/after quiver JSON.
    pub fn render_steps(&self) -> String {
        let mut out = String::new();
        for (k, step) in self.steps.iter().enumerate() {
            out.push_str(&format!("{}. {} ({})\n", k + 1, step.rule, step.detail));
            out.push_str(&format!("   before: {}\n", quiver_to_json(&step.before.0, &step.before.1)));
            for (q, d) in &step.after {
                out.push_str(&format!("   after:  {}\n", quiver_to_json(q, d)));
            }
        }
        out
    }

    pub fn to_json(&self) -> Value {
        let steps: Vec<Value> = self
            .steps
            .iter()
            .map(|s| {
                json!({
                    "rule": s.rule.name(),
                    "detail": s.detail,
                    "before": quiver_to_json(&s.before.0, &s.before.1),
                    "after": s.after.iter().map(|(q, d)| quiver_to_json(q, d)).collect::<Vec<_>>(),
                })
            })
            .collect();
        let leaves: Vec<Value> = self
            .leaves
            .iter()
            .map(|l| json!({ "class": l.label(), "quiver": quiver_to_json(&l.quiver, &l.d) }))
            .collect();
        json!({ "summary": self.summary(), "steps": steps, "leaves": leaves })
    }
}

fn check_vertex(q: &Quiver, v: usize) -> Result<()> {
    if v < q.vertex_count() {
        Ok(())
    } else {
        Err(Error::Rewrite(format!("no vertex at position {v}")))
    }
}

/// Reverses every arrow.
pub fn reverse_arrows(q: &Quiver, d: &SummandVector) -> Instance {
    (q.opposite(), d.clone())
}

/// Deletes `v` (which must have `d_v = 0`), replacing each path `a b` of
/// length two through `v` by a new arrow `ab`.
pub fn remove_zero_vertex(q: &Quiver, d: &SummandVector, v: usize) -> Result<Instance> {
    check_vertex(q, v)?;
    if d.get(v) != 0 {
        return Err(Error::Rewrite(format!(
            "zero-vertex removal needs d = 0 at `{}`, found {}",
            q.vertex_id(v),
            d.get(v)
        )));
    }
    let keep: Vec<usize> = (0..q.vertex_count()).filter(|&u| u != v).collect();
    let remap = |u: usize| if u > v { u - 1 } else { u };
    let mut taken: HashSet<String> = HashSet::new();
    let mut arrows = Vec::new();
    for a in q.arrows().iter().filter(|a| a.source != v && a.target != v) {
        taken.insert(a.id.clone());
        arrows.push(Arrow {
            id: a.id.clone(),
            source: remap(a.source),
            target: remap(a.target),
        });
    }
    for &a in q.incoming(v) {
        for &b in q.outgoing(v) {
            let (x, y) = (&q.arrows()[a], &q.arrows()[b]);
            let id = fresh(&format!("{}{}", x.id, y.id), |s| taken.contains(s));
            taken.insert(id.clone());
            arrows.push(Arrow {
                id,
                source: remap(x.source),
                target: remap(y.target),
            });
        }
    }
    let vertices = keep.iter().map(|&u| q.vertex_id(u).to_string()).collect();
    Ok((Quiver::new(vertices, arrows)?, d.restrict(&keep)))
}

fn convert(q: &Quiver, d: &SummandVector, v: usize, sink: bool) -> Result<Instance> {
    check_vertex(q, v)?;
    let (ok, kind) = if sink { (q.is_sink(v), "sink") } else { (q.is_source(v), "source") };
    if !ok {
        return Err(Error::Rewrite(format!("`{}` is not a {kind}", q.vertex_id(v))));
    }
    let k = d.get(v);
    let at_v = |a: &Arrow| if sink { a.target == v } else { a.source == v };
    let mut taken: HashSet<String> = q.arrows().iter().filter(|a| !at_v(a)).map(|a| a.id.clone()).collect();
    let mut arrows = Vec::new();
    for a in q.arrows() {
        if !at_v(a) {
            arrows.push(a.clone());
        } else if k == 1 {
            taken.insert(a.id.clone());
            arrows.push(a.clone());
        } else {
            for c in 0..k {
                let id = fresh(&format!("{}.{c}", a.id), |s| taken.contains(s));
                taken.insert(id.clone());
                arrows.push(Arrow { id, ..a.clone() });
            }
        }
    }
    let mut d2 = d.clone();
    d2.set(v, 1);
    Ok((Quiver::new(q.vertices().to_vec(), arrows)?, d2))
}

/// Source `v` with `d_v = k` becomes `d_v = 1` with `k` copies of each of its
/// arrows (none when `k = 0`).
pub fn convert_source(q: &Quiver, d: &SummandVector, v: usize) -> Result<Instance> {
    convert(q, d, v, false)
}

pub fn convert_sink(q: &Quiver, d: &SummandVector, v: usize) -> Result<Instance> {
    convert(q, d, v, true)
}

fn split(q: &Quiver, d: &SummandVector, v: usize, part_a: &[usize], sink: bool) -> Result<Instance> {
    check_vertex(q, v)?;
    let (ok, kind, at_v) = if sink {
        (q.is_sink(v), "sink", q.incoming(v))
    } else {
        (q.is_source(v), "source", q.outgoing(v))
    };
    if !ok {
        return Err(Error::Rewrite(format!("`{}` is not a {kind}", q.vertex_id(v))));
    }
    let a_set: HashSet<usize> = part_a.iter().copied().collect();
    if a_set.is_empty() || a_set.len() >= at_v.len() || !a_set.iter().all(|a| at_v.contains(a)) {
        return Err(Error::Rewrite(format!(
            "split of `{}` needs a partition of its {} arrows into two nonempty parts",
            q.vertex_id(v),
            at_v.len()
        )));
    }
    let id = q.vertex_id(v);
    let others: HashSet<&str> = q.vertices().iter().map(String::as_str).filter(|&u| u != id).collect();
    let va = fresh(&format!("{id}^A"), |s| others.contains(s));
    let vb = fresh(&format!("{id}^B"), |s| others.contains(s) || s == va);
    let remap = |u: usize| if u > v { u + 1 } else { u };
    let arrows = q
        .arrows()
        .iter()
        .enumerate()
        .map(|(a, arrow)| {
            let end = |u: usize| {
                if u == v {
                    if a_set.contains(&a) {
                        v
                    } else {
                        v + 1
                    }
                } else {
                    remap(u)
                }
            };
            Arrow {
                id: arrow.id.clone(),
                source: end(arrow.source),
                target: end(arrow.target),
            }
        })
        .collect();
    let mut vertices: Vec<String> = q.vertices().to_vec();
    vertices.splice(v..=v, [va, vb]);
    let mut values = d.values().to_vec();
    values.insert(v, d.get(v));
    Ok((Quiver::new(vertices, arrows)?, SummandVector::new(values)))
}

/// Replaces source `v` by `v^A` carrying the arrows in `part_a` and `v^B`
/// carrying the rest, both with summand value `d_v`.
pub fn split_source(q: &Quiver, d: &SummandVector, v: usize, part_a: &[usize]) -> Result<Instance> {
    split(q, d, v, part_a, false)
}

pub fn split_sink(q: &Quiver, d: &SummandVector, v: usize, part_a: &[usize]) -> Result<Instance> {
    split(q, d, v, part_a, true)
}

fn merge(q: &Quiver, d: &SummandVector, u: usize, w: usize, sink: bool) -> Result<Instance> {
    check_vertex(q, u)?;
    check_vertex(q, w)?;
    let kind = if sink { "sinks" } else { "sources" };
    let ok = |v| if sink { q.is_sink(v) } else { q.is_source(v) };
    if u == w || !ok(u) || !ok(w) {
        return Err(Error::Rewrite(format!(
            "merge needs two distinct {kind}, got `{}` and `{}`",
            q.vertex_id(u),
            q.vertex_id(w)
        )));
    }
    if d.get(u) != d.get(w) {
        return Err(Error::Rewrite(format!(
            "merge needs equal summand values, got {} and {}",
            d.get(u),
            d.get(w)
        )));
    }
    let (lo, hi) = (u.min(w), u.max(w));
    let others: HashSet<&str> = (0..q.vertex_count())
        .filter(|&x| x != u && x != w)
        .map(|x| q.vertex_id(x))
        .collect();
    let merged = fresh(&format!("{}+{}", q.vertex_id(u), q.vertex_id(w)), |s| others.contains(s));
    let remap = |x: usize| match x {
        x if x == hi => lo,
        x if x > hi => x - 1,
        x => x,
    };
    let arrows = q
        .arrows()
        .iter()
        .map(|a| Arrow {
            id: a.id.clone(),
            source: remap(a.source),
            target: remap(a.target),
        })
        .collect();
    let mut vertices: Vec<String> = q.vertices().to_vec();
    vertices[lo] = merged;
    vertices.remove(hi);
    let keep: Vec<usize> = (0..q.vertex_count()).filter(|&x| x != hi).collect();
    Ok((Quiver::new(vertices, arrows)?, d.restrict(&keep)))
}

/// Fuses two sources with equal summand value into one carrying both arrow
/// sets; the inverse of [`split_source`].
pub fn merge_sources(q: &Quiver, d: &SummandVector, u: usize, w: usize) -> Result<Instance> {
    merge(q, d, u, w, false)
}

pub fn merge_sinks(q: &Quiver, d: &SummandVector, u: usize, w: usize) -> Result<Instance> {
    merge(q, d, u, w, true)
}

pub fn split_components(q: &Quiver, d: &SummandVector) -> Vec<Instance> {
    q.connected_components(d)
}

fn arrow_ids(q: &Quiver, arrows: &[usize]) -> String {
    arrows.iter().map(|&a| q.arrows()[a].id.as_str()).collect::<Vec<_>>().join(" ")
}

/// Reduces `(q, d)` to leaves whose counts multiply to `[q, d]`.
pub fn normalize(q: &Quiver, d: &SummandVector) -> ReductionTrace {
    let mut trace = ReductionTrace::default();
    let (mut cur, mut cd) = (q.clone(), d.clone());
    while let Some(v) = (0..cur.vertex_count()).find(|&v| cd.get(v) == 0) {
        let next = remove_zero_vertex(&cur, &cd, v).expect("d_v = 0");
        trace.steps.push(ReductionStep {
            rule: Rule::ZeroVertexRemoval,
            before: (cur.clone(), cd.clone()),
            after: vec![next.clone()],
            detail: format!("vertex {}", cur.vertex_id(v)),
        });
        (cur, cd) = next;
    }
    for (c, cdv) in split_with_step(&mut trace, cur, cd) {
        reduce_component(&mut trace, c, cdv);
    }
    trace
}

/// Splits into components, recording a step when there is more than one.
fn split_with_step(trace: &mut ReductionTrace, q: Quiver, d: SummandVector) -> Vec<Instance> {
    let parts = split_components(&q, &d);
    if parts.len() > 1 {
        trace.steps.push(ReductionStep {
            rule: Rule::ComponentSplit,
            before: (q, d),
            after: parts.clone(),
            detail: format!("{} components", parts.len()),
        });
    }
    parts
}

/// Arrows at `v` grouped by the component of `Q - v` containing their other
/// endpoint; groups ordered by first arrow.
fn groups_without(q: &Quiver, v: usize, at_v: &[usize], sink: bool) -> Vec<Vec<usize>> {
    let keep: Vec<usize> = (0..q.vertex_count()).filter(|&u| u != v).collect();
    let sets = q.induced(&keep).component_vertex_sets();
    let mut comp = vec![usize::MAX; q.vertex_count()];
    for (k, set) in sets.iter().enumerate() {
        for &x in set {
            comp[keep[x]] = k;
        }
    }
    let mut groups: Vec<(usize, Vec<usize>)> = Vec::new();
    for &a in at_v {
        let other = if sink { q.arrows()[a].source } else { q.arrows()[a].target };
        match groups.iter_mut().find(|(c, _)| *c == comp[other]) {
            Some((_, g)) => g.push(a),
            None => groups.push((comp[other], vec![a])),
        }
    }
    groups.into_iter().map(|(_, g)| g).collect()
}

/// A split of a source or sink that disconnects the component, if any.
fn disconnecting_split(q: &Quiver) -> Option<(usize, Vec<usize>, bool)> {
    for sink in [false, true] {
        for v in 0..q.vertex_count() {
            let (ok, at_v) = if sink {
                (q.is_sink(v), q.incoming(v))
            } else {
                (q.is_source(v), q.outgoing(v))
            };
            if !ok || at_v.len() < 2 {
                continue;
            }
            let groups = groups_without(q, v, at_v, sink);
            if groups.len() >= 2 {
                return Some((v, groups[0].clone(), sink));
            }
        }
    }
    None
}

/// Source `s` and sink `t` joined by direct arrows while both have other
/// arrows too.
fn shortcut(q: &Quiver) -> Option<(usize, usize)> {
    for s in (0..q.vertex_count()).filter(|&s| q.is_source(s)) {
        for t in (0..q.vertex_count()).filter(|&t| q.is_sink(t)) {
            let direct = q.outgoing(s).iter().filter(|&&a| q.arrows()[a].target == t).count();
            if direct > 0 && direct < q.outgoing(s).len() && direct < q.incoming(t).len() {
                return Some((s, t));
            }
        }
    }
    None
}

fn push_step(trace: &mut ReductionTrace, rule: Rule, before: &Instance, after: &Instance, detail: String) {
    trace.steps.push(ReductionStep {
        rule,
        before: before.clone(),
        after: vec![after.clone()],
        detail,
    });
}

fn reduce_component(trace: &mut ReductionTrace, q: Quiver, d: SummandVector) {
    if q.vertex_count() == 1 {
        trace.leaves.push(Leaf {
            quiver: q,
            d,
            class: Classification::Point,
        });
        return;
    }
    let inst = (q.clone(), d.clone());

    if let Some((v, part, sink)) = disconnecting_split(&q) {
        let next = split(&q, &d, v, &part, sink).expect("valid disconnecting split");
        let rule = if sink { Rule::SinkSplit } else { Rule::SourceSplit };
        let detail = format!("vertex {}, part A: {}", q.vertex_id(v), arrow_ids(&q, &part));
        push_step(trace, rule, &inst, &next, detail);
        for (c, cd) in split_with_step(trace, next.0, next.1) {
            reduce_component(trace, c, cd);
        }
        return;
    }

    if let Some((s, t)) = shortcut(&q) {
        // keep the long arrows on s^A, move the direct ones to s^B
        let long: Vec<usize> = q.outgoing(s).iter().copied().filter(|&a| q.arrows()[a].target != t).collect();
        let first = split_source(&q, &d, s, &long).expect("shortcut source split");
        push_step(
            trace,
            Rule::SourceSplit,
            &inst,
            &first,
            format!("vertex {}, part A: {}", q.vertex_id(s), arrow_ids(&q, &long)),
        );
        let (q1, d1) = &first;
        let sb = s + 1;
        let t1 = if t > s { t + 1 } else { t };
        let keep: Vec<usize> = q1.incoming(t1).iter().copied().filter(|&a| q1.arrows()[a].source != sb).collect();
        let second = split_sink(q1, d1, t1, &keep).expect("shortcut sink split");
        push_step(
            trace,
            Rule::SinkSplit,
            &first,
            &second,
            format!("vertex {}, part A: {}", q1.vertex_id(t1), arrow_ids(q1, &keep)),
        );
        for (c, cd) in split_with_step(trace, second.0, second.1) {
            reduce_component(trace, c, cd);
        }
        return;
    }

    let class = classify_direct(&q, &d);
    if class != Classification::Irreducible {
        trace.leaves.push(Leaf { quiver: q, d, class });
        return;
    }
    if q.longest_path_len() == 2 {
        let mut trial = ReductionTrace::default();
        if let Some(leaves) = merged_a3(&mut trial, &q, &d) {
            trace.steps.extend(trial.steps);
            trace.leaves.extend(leaves);
            return;
        }
    }
    trace.leaves.push(Leaf {
        quiver: q,
        d,
        class: Classification::Irreducible,
    });
}

/// Point, radical-square-zero or single-arrow equioriented A3 as given.
fn classify_direct(q: &Quiver, d: &SummandVector) -> Classification {
    if q.vertex_count() == 1 {
        return Classification::Point;
    }
    if q.longest_path_len() <= 1 {
        return Classification::RadSquareZero {
            dim: q.weighted_path_count(d, false) as usize,
        };
    }
    if q.vertex_count() == 3 && q.arrow_count() == 2 && q.longest_path_len() == 2 {
        let s = q.topological_order()[0];
        let a = q.outgoing(s)[0];
        let m = q.arrows()[a].target;
        let t = q.arrows()[q.outgoing(m)[0]].target;
        return Classification::A3 {
            l: d.get(s),
            d: d.get(m),
            m: d.get(t),
        };
    }
    Classification::Irreducible
}

/// Converts every source and sink to `d = 1`, merges all sources and all
/// sinks, and detaches direct source-to-sink arrows. Succeeds when what is
/// left is `S => M => T` with parallel arrows, which has the count of the
/// single-arrow A3 with end values given by the parallel counts.
fn merged_a3(trace: &mut ReductionTrace, q: &Quiver, d: &SummandVector) -> Option<Vec<Leaf>> {
    let mut cur: Instance = (q.clone(), d.clone());
    for sink in [false, true] {
        loop {
            let (cq, cd) = &cur;
            let Some(v) = (0..cq.vertex_count())
                .find(|&v| cd.get(v) >= 2 && if sink { cq.is_sink(v) } else { cq.is_source(v) })
            else {
                break;
            };
            let next = convert(cq, cd, v, sink).ok()?;
            let rule = if sink { Rule::SinkConversion } else { Rule::SourceConversion };
            push_step(trace, rule, &cur, &next, format!("vertex {}, d = {}", cq.vertex_id(v), cd.get(v)));
            cur = next;
        }
    }
    for sink in [false, true] {
        loop {
            let (cq, cd) = &cur;
            let ends: Vec<usize> = (0..cq.vertex_count())
                .filter(|&v| if sink { cq.is_sink(v) } else { cq.is_source(v) })
                .collect();
            if ends.len() < 2 {
                break;
            }
            let next = merge(cq, cd, ends[0], ends[1], sink).ok()?;
            let rule = if sink { Rule::SinkMerge } else { Rule::SourceMerge };
            let detail = format!("vertices {} and {}", cq.vertex_id(ends[0]), cq.vertex_id(ends[1]));
            push_step(trace, rule, &cur, &next, detail);
            cur = next;
        }
    }
    let (cq, cd) = &cur;
    if cq.vertex_count() != 3 {
        return None;
    }
    let order = cq.topological_order();
    let (s, m, t) = (order[0], order[1], order[2]);
    if !cq.is_source(s) || !cq.is_sink(t) || cq.is_source(m) || cq.is_sink(m) {
        return None;
    }
    let mult = cq.arrow_multiplicities();
    let (k1, k2, k3) = (mult[s][m], mult[m][t], mult[s][t]);
    let mut leaves = Vec::new();
    let mut main = cur.clone();
    if k3 > 0 {
        let mut sub = ReductionTrace::default();
        reduce_component(&mut sub, cq.clone(), cd.clone());
        // the shortcut move applies; its leaves are the A3 part and the detached arrows
        trace.steps.extend(sub.steps);
        for leaf in sub.leaves {
            if leaf.quiver.vertex_count() == 3 {
                main = (leaf.quiver, leaf.d);
            } else {
                leaves.push(leaf);
            }
        }
    }
    leaves.insert(
        0,
        Leaf {
            quiver: main.0,
            d: main.1,
            class: Classification::A3 {
                l: k1,
                d: cd.get(m),
                m: k2,
            },
        },
    );
    Some(leaves)
}

/// `[Q, d]` at `q` as a product of leaf counts; irreducible leaves are
/// counted by enumeration.
pub fn dispatch_count(q: &Quiver, d: &SummandVector, field_q: u32, opts: &CountOptions) -> Result<CountResult> {
    let start = Instant::now();
    crate::field::FieldTable::new(field_q)?;
    let trace = normalize(q, d);
    let mut value = BigUint::one();
    let mut enumerated = 0;
    for leaf in &trace.leaves {
        let v = match leaf.class {
            Classification::Irreducible => {
                let r = count_commuting(&leaf.quiver, &leaf.d, field_q, opts)?;
                enumerated = enumerated.max(r.dim_enumerated);
                r.value
            }
            ref class => eval_at(&base_count_poly(class)?, field_q)?,
        };
        value *= v;
    }
    Ok(CountResult {
        value,
        q: field_q,
        dim_enumerated: enumerated,
        mode: Mode::Radical,
        engine: Engine::Dispatch,
        elapsed: start.elapsed().as_secs_f64(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn star(n: usize) -> Quiver {
        let names: Vec<String> = std::iter::once("c".to_string()).chain((0..n).map(|i| format!("l{i}"))).collect();
        let refs: Vec<&str> = names.iter().map(String::as_str).collect();
        let edges: Vec<(&str, &str)> = refs[1..].iter().map(|&l| ("c", l)).collect();
        Quiver::from_edges(&refs, &edges).unwrap()
    }

    fn shortcut_quiver() -> Quiver {
        Quiver::from_edges(&["1", "2", "3"], &[("1", "2"), ("2", "3"), ("1", "3")]).unwrap()
    }

    #[test]
    fn zero_vertex_removal_composes_arrows() {
        let q = Quiver::linear(3);
        let (r, d) = remove_zero_vertex(&q, &SummandVector::new(vec![1, 0, 1]), 1).unwrap();
        assert_eq!(r.vertices(), &["1", "3"]);
        assert_eq!(r.arrow_count(), 1);
        assert_eq!(r.arrows()[0].id, "a0a1");
        assert_eq!(d.values(), &[1, 1]);
        assert!(remove_zero_vertex(&q, &SummandVector::ones(3), 1).is_err());
        // a sink just loses its arrows
        let (r, _) = remove_zero_vertex(&q, &SummandVector::new(vec![1, 1, 0]), 2).unwrap();
        assert_eq!(r.arrow_count(), 1);
    }

    #[test]
    fn conversion_duplicates_arrows() {
        let q = Quiver::linear(2);
        let (r, d) = convert_source(&q, &SummandVector::new(vec![3, 1]), 0).unwrap();
        assert_eq!(r.arrow_count(), 3);
        assert_eq!(d.values(), &[1, 1]);
        let ids: Vec<&str> = r.arrows().iter().map(|a| a.id.as_str()).collect();
        assert_eq!(ids, vec!["a0.0", "a0.1", "a0.2"]);
        let same = convert_source(&q, &SummandVector::ones(2), 0).unwrap();
        assert_eq!(same.0, q);
        assert!(convert_source(&q, &SummandVector::ones(2), 1).is_err());
        let (r, d) = convert_sink(&q, &SummandVector::new(vec![1, 0]), 1).unwrap();
        assert_eq!(r.arrow_count(), 0);
        assert_eq!(d.values(), &[1, 1]);
    }

    #[test]
    fn split_then_merge_restores() {
        let q = star(2);
        let d = SummandVector::ones(3);
        let (s, sd) = split_source(&q, &d, 0, &[0]).unwrap();
        assert_eq!(s.vertices(), &["c^A", "c^B", "l0", "l1"]);
        assert_eq!(s.component_vertex_sets().len(), 2);
        let (m, md) = merge_sources(&s, &sd, 0, 1).unwrap();
        assert_eq!(md, d);
        assert_eq!(crate::canonical::canonical_hash(&m, &md), crate::canonical::canonical_hash(&q, &d));
        assert!(split_source(&q, &d, 0, &[0, 1]).is_err());
        assert!(split_source(&q, &d, 0, &[]).is_err());
        assert!(merge_sources(&q, &d, 0, 0).is_err());
        assert!(merge_sinks(&q, &SummandVector::new(vec![1, 1, 2]), 1, 2).is_err());
    }

    #[test]
    fn star_reduces_to_a2_leaves() {
        let trace = normalize(&star(4), &SummandVector::ones(5));
        assert_eq!(trace.summary(), "4 × rad-square-zero(A2)");
    }

    #[test]
    fn canonical_shapes() {
        let trace = normalize(&Quiver::linear(3), &SummandVector::new(vec![2, 3, 4]));
        assert_eq!(trace.summary(), "a3-shape(2,3,4)");
        assert!(trace.steps.is_empty());
        let trace = normalize(&Quiver::linear(4), &SummandVector::ones(4));
        assert_eq!(trace.summary(), "irreducible");
    }

    #[test]
    fn shortcut_detaches() {
        let trace = normalize(&shortcut_quiver(), &SummandVector::ones(3));
        let rules: Vec<Rule> = trace.steps.iter().map(|s| s.rule).collect();
        assert_eq!(rules, vec![Rule::SourceSplit, Rule::SinkSplit, Rule::ComponentSplit]);
        assert_eq!(trace.summary(), "a3-shape(1,1,1), rad-square-zero(A2)");
    }

    #[test]
    fn merged_form_is_recognised() {
        // two sources into a middle vertex, then one sink: 1 -> 3, 2 -> 3, 3 -> 4
        let q = Quiver::from_edges(&["1", "2", "3", "4"], &[("1", "3"), ("2", "3"), ("3", "4")]).unwrap();
        let trace = normalize(&q, &SummandVector::new(vec![1, 1, 2, 2]));
        assert_eq!(trace.summary(), "a3-shape(2,2,2)");
    }

    #[test]
    fn dispatch_matches_closed_forms() {
        let opts = CountOptions::with_jobs(1);
        let two_a2 = Quiver::from_edges(&["1", "2", "3", "4"], &[("1", "2"), ("3", "4")]).unwrap();
        let r = dispatch_count(&two_a2, &SummandVector::ones(4), 3, &opts).unwrap();
        assert_eq!(r.value, BigUint::from(81u32));
        let r = dispatch_count(&Quiver::linear(3), &SummandVector::ones(3), 2, &opts).unwrap();
        assert_eq!(r.value, BigUint::from(40u32));
        assert_eq!(r.dim_enumerated, 0);
        let r = dispatch_count(&shortcut_quiver(), &SummandVector::ones(3), 2, &opts).unwrap();
        assert_eq!(r.value, BigUint::from(160u32));
    }
}
