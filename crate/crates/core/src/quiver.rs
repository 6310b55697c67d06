//! Finite acyclic quivers, summand vectors and paths.
//!
//! Vertices and arrows carry opaque string ids. Internally everything is
//! addressed by position: vertex `i` is `vertices()[i]`, arrow `a` is
//! `arrows()[a]`. Positions follow the order in which the quiver was built
//! (file order for parsed quivers), and every listing this module produces is
//! derived from that order.

use std::cmp::Reverse;
use std::collections::{BTreeMap, BinaryHeap, HashMap, HashSet};
use std::fmt;

use serde::Deserialize;
use serde_json::{json, Value};

use crate::error::{Error, Result};

/// Upper bound on the number of basis paths (weighted by summand products)
/// any algebra built from a quiver may have.
pub const PATH_CAP: u128 = 1 << 20;

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Arrow {
    pub id: String,
    pub source: usize,
    pub target: usize,
}

#[derive(Clone, Debug)]
pub struct Quiver {
    vertices: Vec<String>,
    arrows: Vec<Arrow>,
    index: HashMap<String, usize>,
    outgoing: Vec<Vec<usize>>,
    incoming: Vec<Vec<usize>>,
    topo: Vec<usize>,
}

impl PartialEq for Quiver {
    fn eq(&self, other: &Self) -> bool {
        self.vertices == other.vertices && self.arrows == other.arrows
    }
}

impl Eq for Quiver {}

impl Quiver {
    /// Builds a quiver from vertex ids and arrows given by vertex position.
    pub fn new(vertices: Vec<String>, arrows: Vec<Arrow>) -> Result<Self> {
        let mut index = HashMap::with_capacity(vertices.len());
        for (i, v) in vertices.iter().enumerate() {
            if index.insert(v.clone(), i).is_some() {
                return Err(Error::DuplicateVertex(v.clone()));
            }
        }
        let n = vertices.len();
        let mut seen = HashSet::with_capacity(arrows.len());
        let mut outgoing = vec![Vec::new(); n];
        let mut incoming = vec![Vec::new(); n];
        for (a, arrow) in arrows.iter().enumerate() {
            if !seen.insert(arrow.id.as_str()) {
                return Err(Error::DuplicateArrow(arrow.id.clone()));
            }
            for end in [arrow.source, arrow.target] {
                if end >= n {
                    return Err(Error::UnknownVertex(format!("#{end}")));
                }
            }
            outgoing[arrow.source].push(a);
            incoming[arrow.target].push(a);
        }
        let topo = topological_order(n, &arrows, &outgoing, &incoming)
            .map_err(|v| Error::Cycle(vertices[v].clone()))?;
        Ok(Self {
            vertices,
            arrows,
            index,
            outgoing,
            incoming,
            topo,
        })
    }

    /// Builds a quiver from `(arrow id, source id, target id)` triples.
    pub fn with_ids(vertices: Vec<String>, arrows: Vec<(String, String, String)>) -> Result<Self> {
        let lookup: HashMap<&str, usize> = vertices
            .iter()
            .enumerate()
            .map(|(i, v)| (v.as_str(), i))
            .collect();
        let mut resolved = Vec::with_capacity(arrows.len());
        for (id, s, t) in arrows {
            let source = *lookup.get(s.as_str()).ok_or_else(|| Error::UnknownVertex(s.clone()))?;
            let target = *lookup.get(t.as_str()).ok_or_else(|| Error::UnknownVertex(t.clone()))?;
            resolved.push(Arrow { id, source, target });
        }
        Self::new(vertices, resolved)
    }

    /// Builds a quiver from edges between vertex ids, naming arrows
    /// `a0`, `a1`, ... in the given order.
    pub fn from_edges(vertices: &[&str], edges: &[(&str, &str)]) -> Result<Self> {
        Self::with_ids(
            vertices.iter().map(|v| v.to_string()).collect(),
            edges
                .iter()
                .enumerate()
                .map(|(i, (s, t))| (format!("a{i}"), s.to_string(), t.to_string()))
                .collect(),
        )
    }

    /// Equioriented type A quiver `1 -> 2 -> ... -> n`.
    pub fn linear(n: usize) -> Self {
        let names: Vec<String> = (1..=n).map(|i| i.to_string()).collect();
        let arrows = (0..n.saturating_sub(1))
            .map(|i| Arrow {
                id: format!("a{i}"),
                source: i,
                target: i + 1,
            })
            .collect();
        Self::new(names, arrows).expect("a linear quiver is acyclic")
    }

    pub fn vertex_count(&self) -> usize {
        self.vertices.len()
    }

    pub fn arrow_count(&self) -> usize {
        self.arrows.len()
    }

    pub fn vertices(&self) -> &[String] {
        &self.vertices
    }

    pub fn arrows(&self) -> &[Arrow] {
        &self.arrows
    }

    pub fn vertex_id(&self, v: usize) -> &str {
        &self.vertices[v]
    }

    pub fn vertex_index(&self, id: &str) -> Option<usize> {
        self.index.get(id).copied()
    }

    fn require_vertex(&self, id: &str) -> Result<usize> {
        self.vertex_index(id).ok_or_else(|| Error::UnknownVertex(id.to_string()))
    }

    /// Arrows leaving `v`, in arrow order.
    pub fn outgoing(&self, v: usize) -> &[usize] {
        &self.outgoing[v]
    }

    /// Arrows entering `v`, in arrow order.
    pub fn incoming(&self, v: usize) -> &[usize] {
        &self.incoming[v]
    }

    pub fn is_source(&self, v: usize) -> bool {
        self.incoming[v].is_empty()
    }

    pub fn is_sink(&self, v: usize) -> bool {
        self.outgoing[v].is_empty()
    }

    /// A topological order; ties are broken by vertex position.
    pub fn topological_order(&self) -> &[usize] {
        &self.topo
    }

    /// Multiplicity matrix: entry `[u][v]` is the number of arrows `u -> v`.
    pub fn arrow_multiplicities(&self) -> Vec<Vec<u32>> {
        let n = self.vertex_count();
        let mut m = vec![vec![0u32; n]; n];
        for a in &self.arrows {
            m[a.source][a.target] += 1;
        }
        m
    }

    /// Number of paths `u ~> v` of length at least `min_len` (0 or 1), for
    /// every pair, saturating at `u128::MAX`.
    pub fn path_counts(&self, min_len: usize) -> Vec<Vec<u128>> {
        let n = self.vertex_count();
        let mut counts = vec![vec![0u128; n]; n];
        for &u in self.topo.iter().rev() {
            let mut row = vec![0u128; n];
            for &a in &self.outgoing[u] {
                let w = self.arrows[a].target;
                row[w] = row[w].saturating_add(1);
                for v in 0..n {
                    row[v] = row[v].saturating_add(counts[w][v]);
                }
            }
            counts[u] = row;
        }
        if min_len == 0 {
            for (v, row) in counts.iter_mut().enumerate() {
                row[v] = row[v].saturating_add(1);
            }
        }
        counts
    }

    /// `sum_{u,v} d_u d_v #paths(u ~> v)`, counting constant paths when
    /// `include_constants` is set. This is the dimension of the algebra (or
    /// its radical) built from `(self, d)`.
    pub fn weighted_path_count(&self, d: &SummandVector, include_constants: bool) -> u128 {
        let counts = self.path_counts(usize::from(!include_constants));
        let mut total = 0u128;
        for (u, row) in counts.iter().enumerate() {
            for (v, &c) in row.iter().enumerate() {
                let w = u128::from(d.get(u)) * u128::from(d.get(v));
                total = total.saturating_add(w.saturating_mul(c));
            }
        }
        total
    }

    /// Length of the longest path (0 for an edgeless quiver).
    pub fn longest_path_len(&self) -> usize {
        let mut depth = vec![0usize; self.vertex_count()];
        for &u in self.topo.iter().rev() {
            depth[u] = self.outgoing[u]
                .iter()
                .map(|&a| depth[self.arrows[a].target] + 1)
                .max()
                .unwrap_or(0);
        }
        depth.into_iter().max().unwrap_or(0)
    }

    /// All paths `from ~> to` of length at least `min_len`, ordered
    /// lexicographically by their arrow sequence (arrows compared by position).
    pub fn enumerate_paths(&self, from: &str, to: &str, min_len: usize) -> Result<Vec<Path>> {
        let from = self.require_vertex(from)?;
        let to = self.require_vertex(to)?;
        Ok(self.paths_between(from, to, min_len))
    }

    /// Index-based form of [`Quiver::enumerate_paths`].
    pub fn paths_between(&self, from: usize, to: usize, min_len: usize) -> Vec<Path> {
        let mut out = Vec::new();
        let mut stack = Vec::new();
        self.walk(from, to, min_len, &mut stack, &mut out);
        out
    }

    fn walk(&self, at: usize, to: usize, min_len: usize, stack: &mut Vec<usize>, out: &mut Vec<Path>) {
        if at == to {
            if stack.len() >= min_len {
                out.push(Path {
                    start: self.path_start(stack, to),
                    end: to,
                    arrows: stack.clone(),
                });
            }
            // acyclic: no path leaves `to` and comes back
            return;
        }
        for &a in &self.outgoing[at] {
            stack.push(a);
            self.walk(self.arrows[a].target, to, min_len, stack, out);
            stack.pop();
        }
    }

    fn path_start(&self, arrows: &[usize], end: usize) -> usize {
        arrows.first().map_or(end, |&a| self.arrows[a].source)
    }

    /// Reverses every arrow, keeping ids and positions.
    pub fn opposite(&self) -> Quiver {
        let arrows = self
            .arrows
            .iter()
            .map(|a| Arrow {
                id: a.id.clone(),
                source: a.target,
                target: a.source,
            })
            .collect();
        Quiver::new(self.vertices.clone(), arrows).expect("the opposite of an acyclic quiver is acyclic")
    }

    /// Vertex sets of the weakly connected components, each sorted by
    /// position, ordered by their first vertex.
    pub fn component_vertex_sets(&self) -> Vec<Vec<usize>> {
        let n = self.vertex_count();
        let mut parent: Vec<usize> = (0..n).collect();
        fn find(parent: &mut [usize], mut x: usize) -> usize {
            while parent[x] != x {
                parent[x] = parent[parent[x]];
                x = parent[x];
            }
            x
        }
        for a in &self.arrows {
            let (ra, rb) = (find(&mut parent, a.source), find(&mut parent, a.target));
            if ra != rb {
                let (lo, hi) = if ra < rb { (ra, rb) } else { (rb, ra) };
                parent[hi] = lo;
            }
        }
        let mut groups: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
        for v in 0..n {
            let r = find(&mut parent, v);
            groups.entry(r).or_default().push(v);
        }
        let mut sets: Vec<Vec<usize>> = groups.into_values().collect();
        sets.sort_by_key(|s| s[0]);
        sets
    }

    pub fn is_connected(&self) -> bool {
        self.component_vertex_sets().len() <= 1
    }

    /// Splits into maximal weakly connected subquivers with restricted
    /// summand vectors, ordered by the position of their first vertex.
    pub fn connected_components(&self, d: &SummandVector) -> Vec<(Quiver, SummandVector)> {
        self.component_vertex_sets()
            .into_iter()
            .map(|set| (self.induced(&set), d.restrict(&set)))
            .collect()
    }

    /// Full subquiver on `keep` (positions, kept in the given order).
    pub fn induced(&self, keep: &[usize]) -> Quiver {
        let mut remap = vec![usize::MAX; self.vertex_count()];
        for (i, &v) in keep.iter().enumerate() {
            remap[v] = i;
        }
        let arrows = self
            .arrows
            .iter()
            .filter(|a| remap[a.source] != usize::MAX && remap[a.target] != usize::MAX)
            .map(|a| Arrow {
                id: a.id.clone(),
                source: remap[a.source],
                target: remap[a.target],
            })
            .collect();
        let vertices = keep.iter().map(|&v| self.vertices[v].clone()).collect();
        Quiver::new(vertices, arrows).expect("a subquiver of an acyclic quiver is acyclic")
    }

    /// `base`, or `base` with a `'` suffix appended until it names no vertex.
    pub fn fresh_vertex_id(&self, base: &str) -> String {
        fresh(base, |s| self.index.contains_key(s))
    }

    pub fn fresh_arrow_id(&self, base: &str) -> String {
        fresh(base, |s| self.arrows.iter().any(|a| a.id == s))
    }

    /// Compact one-line rendering, e.g. `1->2, 2->3`.
    pub fn describe(&self) -> String {
        if self.arrows.is_empty() {
            return format!("{{{}}}", self.vertices.join(", "));
        }
        let mut parts: Vec<String> = self
            .arrows
            .iter()
            .map(|a| format!("{}->{}", self.vertices[a.source], self.vertices[a.target]))
            .collect();
        let touched: HashSet<usize> = self.arrows.iter().flat_map(|a| [a.source, a.target]).collect();
        parts.extend((0..self.vertex_count()).filter(|v| !touched.contains(v)).map(|v| self.vertices[v].clone()));
        parts.join(", ")
    }
}

pub(crate) fn fresh(base: &str, taken: impl Fn(&str) -> bool) -> String {
    let mut id = base.to_string();
    while taken(&id) {
        id.push('\'');
    }
    id
}

fn topological_order(
    n: usize,
    arrows: &[Arrow],
    outgoing: &[Vec<usize>],
    incoming: &[Vec<usize>],
) -> std::result::Result<Vec<usize>, usize> {
    let mut indeg: Vec<usize> = incoming.iter().map(Vec::len).collect();
    let mut ready: BinaryHeap<Reverse<usize>> = (0..n).filter(|&v| indeg[v] == 0).map(Reverse).collect();
    let mut order = Vec::with_capacity(n);
    while let Some(Reverse(v)) = ready.pop() {
        order.push(v);
        for &a in &outgoing[v] {
            let t = arrows[a].target;
            indeg[t] -= 1;
            if indeg[t] == 0 {
                ready.push(Reverse(t));
            }
        }
    }
    if order.len() == n {
        Ok(order)
    } else {
        Err((0..n).find(|&v| indeg[v] > 0).expect("some vertex is left on a cycle"))
    }
}

/// Number of copies of each indecomposable projective, aligned with the
/// vertex positions of the quiver it belongs to.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct SummandVector(Vec<u32>);

impl SummandVector {
    pub fn new(values: Vec<u32>) -> Self {
        Self(values)
    }

    pub fn for_quiver(quiver: &Quiver, values: Vec<u32>) -> Result<Self> {
        if values.len() != quiver.vertex_count() {
            return Err(Error::SummandKeys(format!(
                "{} entries for {} vertices",
                values.len(),
                quiver.vertex_count()
            )));
        }
        Ok(Self(values))
    }

    pub fn ones(n: usize) -> Self {
        Self(vec![1; n])
    }

    pub fn get(&self, v: usize) -> u32 {
        self.0[v]
    }

    pub fn set(&mut self, v: usize, value: u32) {
        self.0[v] = value;
    }

    pub fn values(&self) -> &[u32] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// Total number of summands `t`.
    pub fn total(&self) -> u64 {
        self.0.iter().map(|&x| u64::from(x)).sum()
    }

    pub fn restrict(&self, keep: &[usize]) -> Self {
        Self(keep.iter().map(|&v| self.0[v]).collect())
    }
}

/// A path in a quiver; `arrows` run from `start` to `end`, and an empty
/// arrow list is the constant path at `start == end`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Path {
    pub start: usize,
    pub end: usize,
    pub arrows: Vec<usize>,
}

impl Path {
    pub fn constant(v: usize) -> Self {
        Self {
            start: v,
            end: v,
            arrows: Vec::new(),
        }
    }

    pub fn len(&self) -> usize {
        self.arrows.len()
    }

    pub fn is_empty(&self) -> bool {
        self.arrows.is_empty()
    }

    pub fn is_constant(&self) -> bool {
        self.arrows.is_empty()
    }

    /// `self` followed by `next`; `None` unless `self` ends where `next` starts.
    pub fn concat(&self, next: &Path) -> Option<Path> {
        (self.end == next.start).then(|| {
            let mut arrows = Vec::with_capacity(self.len() + next.len());
            arrows.extend_from_slice(&self.arrows);
            arrows.extend_from_slice(&next.arrows);
            Path {
                start: self.start,
                end: next.end,
                arrows,
            }
        })
    }

    pub fn render(&self, quiver: &Quiver) -> String {
        if self.arrows.is_empty() {
            format!("e_{}", quiver.vertex_id(self.start))
        } else {
            self.arrows
                .iter()
                .map(|&a| quiver.arrows()[a].id.as_str())
                .collect::<Vec<_>>()
                .join("*")
        }
    }
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct QuiverFile {
    vertices: Vec<String>,
    arrows: Vec<(String, String)>,
    d: HashMap<String, i64>,
}

/// Parses the JSON quiver format
/// `{"vertices":[..],"arrows":[[s,t],..],"d":{vertex:int,..}}`.
/// Arrows are named `a0`, `a1`, ... in file order.
pub fn parse_quiver(text: &str) -> Result<(Quiver, SummandVector)> {
    let file: QuiverFile = serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))?;
    let edges: Vec<(String, String, String)> = file
        .arrows
        .into_iter()
        .enumerate()
        .map(|(i, (s, t))| (format!("a{i}"), s, t))
        .collect();
    let quiver = Quiver::with_ids(file.vertices, edges)?;
    let mut values = Vec::with_capacity(quiver.vertex_count());
    for v in quiver.vertices() {
        match file.d.get(v) {
            Some(&x) if x < 0 => {
                return Err(Error::NegativeSummand {
                    vertex: v.clone(),
                    value: x,
                })
            }
            Some(&x) => values.push(u32::try_from(x).map_err(|_| Error::Parse(format!("d[{v}] too large")))?),
            None => return Err(Error::SummandKeys(format!("missing entry for vertex `{v}`"))),
        }
    }
    if let Some(extra) = file.d.keys().find(|k| quiver.vertex_index(k).is_none()) {
        return Err(Error::SummandKeys(format!("entry for unknown vertex `{extra}`")));
    }
    Ok((quiver, SummandVector(values)))
}

/// JSON value in the quiver file format (arrow ids are not part of it).
pub fn quiver_to_json(quiver: &Quiver, d: &SummandVector) -> Value {
    let arrows: Vec<Value> = quiver
        .arrows()
        .iter()
        .map(|a| json!([quiver.vertex_id(a.source), quiver.vertex_id(a.target)]))
        .collect();
    let mut dmap = serde_json::Map::new();
    for (v, id) in quiver.vertices().iter().enumerate() {
        dmap.insert(id.clone(), json!(d.get(v)));
    }
    json!({ "vertices": quiver.vertices(), "arrows": arrows, "d": dmap })
}

pub fn quiver_to_string(quiver: &Quiver, d: &SummandVector) -> String {
    quiver_to_json(quiver, d).to_string()
}

impl fmt::Display for Quiver {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.describe())
    }
}
