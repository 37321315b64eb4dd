//! Free group actions on graphs and the semidirect products
//! `J = W_K ⋊ G` built from them.
//!
//! The acting groups here are finite, solved through a complete coset
//! table; the Coxeter side always goes through the Tits normal form.

use std::collections::{BTreeMap, HashMap, VecDeque};

use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::error::{Error, Result};
use crate::graph::{GraphDoc, SimpleGraph};
use crate::normal_forms::{tits_reduce_unchecked, CoxeterWord};
use crate::presentation::GroupPresentation;
use crate::word::{Letter, Word};
use crate::word_engine::{Budget, CosetTable, WordEngine};

/// A finite group with elements numbered by the cosets of the trivial
/// subgroup; element 0 is the identity.
#[derive(Clone, Debug)]
pub struct FiniteGroup {
    presentation: GroupPresentation,
    table: CosetTable,
    /// a shortest word for each element
    reps: Vec<Word>,
}

impl FiniteGroup {
    pub fn new(presentation: GroupPresentation, budget: &Budget) -> Result<Self> {
        let engine = WordEngine::new(presentation.clone(), *budget);
        let table = engine
            .coset_table()
            .cloned()
            .ok_or_else(|| Error::OracleInsufficient(format!("coset enumeration did not close under {budget}")))?;
        let mut reps: Vec<Option<Word>> = vec![None; table.index()];
        reps[0] = Some(Word::empty());
        let mut queue = VecDeque::from([0usize]);
        while let Some(c) = queue.pop_front() {
            for l in 0..2 * presentation.generator_count() {
                let d = table.rows[c][l] as usize;
                if reps[d].is_none() {
                    let mut w = reps[c].clone().unwrap();
                    w.push(Letter::from_index(l));
                    reps[d] = Some(w);
                    queue.push_back(d);
                }
            }
        }
        let reps = reps.into_iter().map(|w| w.expect("coset tables are transitive")).collect();
        Ok(FiniteGroup { presentation, table, reps })
    }

    pub fn presentation(&self) -> &GroupPresentation {
        &self.presentation
    }

    pub fn order(&self) -> usize {
        self.table.index()
    }

    pub fn element(&self, w: &Word) -> usize {
        self.table.trace(0, w).expect("complete table")
    }

    pub fn mul(&self, a: usize, b: usize) -> usize {
        self.table.trace(a, &self.reps[b]).expect("complete table")
    }

    pub fn rep(&self, a: usize) -> &Word {
        &self.reps[a]
    }

    /// Word length with respect to the generators.
    pub fn length(&self, a: usize) -> usize {
        self.reps[a].len()
    }
}

/// A group acting on a graph, each generator given as a vertex permutation
/// `v ↦ g·v`.
#[derive(Clone, Debug)]
pub struct GroupAction {
    pub graph: SimpleGraph,
    pub group: FiniteGroup,
    pub action: Vec<Vec<usize>>,
    /// `perms[a]` is the permutation of element `a`
    perms: Vec<Vec<usize>>,
}

fn invert(p: &[usize]) -> Vec<usize> {
    let mut out = vec![0; p.len()];
    for (i, &j) in p.iter().enumerate() {
        out[j] = i;
    }
    out
}

/// Left action of a word: the last letter acts first.
fn act_word(action: &[Vec<usize>], inverses: &[Vec<usize>], w: &Word, v: usize) -> usize {
    w.letters().iter().rev().fold(v, |v, l| if l.inverse { inverses[l.gen()][v] } else { action[l.gen()][v] })
}

impl GroupAction {
    pub fn new(graph: SimpleGraph, group: FiniteGroup, action: Vec<Vec<usize>>) -> Result<Self> {
        let n = graph.vertex_count();
        if action.len() != group.presentation().generator_count() {
            return Err(Error::InvalidAction("one permutation per generator is required".into()));
        }
        for (g, p) in action.iter().enumerate() {
            let mut seen = vec![false; n];
            if p.len() != n || p.iter().any(|&v| v >= n || std::mem::replace(&mut seen[v], true)) {
                return Err(Error::InvalidAction(format!(
                    "image list of {} is not a permutation",
                    group.presentation().generators()[g]
                )));
            }
        }
        let inverses: Vec<Vec<usize>> = action.iter().map(|p| invert(p)).collect();
        let perms = (0..group.order())
            .map(|a| (0..n).map(|v| act_word(&action, &inverses, group.rep(a), v)).collect())
            .collect();
        Ok(GroupAction { graph, group, action, perms })
    }

    /// `g·v` for a group element.
    pub fn act(&self, a: usize, v: usize) -> usize {
        self.perms[a][v]
    }

    pub fn act_word(&self, w: &Word, v: usize) -> usize {
        let inverses: Vec<Vec<usize>> = self.action.iter().map(|p| invert(p)).collect();
        act_word(&self.action, &inverses, w, v)
    }

    /// Orbits as sorted vertex lists, ordered by least element.
    pub fn orbits(&self) -> Vec<Vec<usize>> {
        let n = self.graph.vertex_count();
        let mut seen = vec![false; n];
        let mut out = Vec::new();
        for v in 0..n {
            if seen[v] {
                continue;
            }
            let mut orbit: Vec<usize> = self.perms.iter().map(|p| p[v]).collect();
            orbit.sort_unstable();
            orbit.dedup();
            for &u in &orbit {
                seen[u] = true;
            }
            out.push(orbit);
        }
        out
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ActionReport {
    pub automorphism: bool,
    pub relators_respected: bool,
    pub free: bool,
    pub min_orbit_distance: Option<usize>,
    pub violations: Vec<String>,
}

impl ActionReport {
    pub fn is_valid(&self) -> bool {
        self.violations.is_empty()
    }
}

/// Checks that generators act by automorphisms, relators act trivially,
/// the action is free and vertices in one orbit are at distance at least
/// four.
pub fn check_action(ga: &GroupAction) -> ActionReport {
    let mut violations = Vec::new();
    let names = ga.graph.names();
    let p = ga.group.presentation();
    let mut automorphism = true;
    for (g, perm) in ga.action.iter().enumerate() {
        if let Some((u, v)) = ga.graph.edges().find(|&(u, v)| !ga.graph.adjacent(perm[u], perm[v])) {
            automorphism = false;
            violations.push(format!("{} does not preserve edge {{{}, {}}}", p.generators()[g], names[u], names[v]));
        }
    }
    let mut relators_respected = true;
    for r in p.relators() {
        if let Some(v) = (0..ga.graph.vertex_count()).find(|&v| ga.act_word(r, v) != v) {
            relators_respected = false;
            violations.push(format!("relator {} moves vertex {}", p.format_word(r), names[v]));
        }
    }
    let mut free = true;
    if relators_respected {
        for a in 1..ga.group.order() {
            if let Some(v) = (0..ga.graph.vertex_count()).find(|&v| ga.act(a, v) == v) {
                free = false;
                violations.push(format!("{} fixes vertex {}", p.format_word(ga.group.rep(a)), names[v]));
                break;
            }
        }
    }
    let mut min_orbit_distance: Option<usize> = None;
    for orbit in ga.orbits() {
        for (i, &u) in orbit.iter().enumerate() {
            let dist = ga.graph.distances_from(u);
            for &v in &orbit[i + 1..] {
                // vertices in different components count as infinitely far
                if let Some(d) = dist[v] {
                    if min_orbit_distance.is_none_or(|m| d < m) {
                        min_orbit_distance = Some(d);
                    }
                    if d < 4 && !violations.iter().any(|s| s.starts_with("orbit")) {
                        violations.push(format!("orbit vertices {} and {} are at distance {d}", names[u], names[v]));
                    }
                }
            }
        }
    }
    ActionReport { automorphism, relators_respected, free, min_orbit_distance, violations }
}

/// Orbit representatives and the words moving edge endpoints into them.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OrbitData {
    pub vprime: Vec<usize>,
    /// `(v, u)` with `v ∈ V′`
    pub eprime: Vec<(usize, usize)>,
    /// for each endpoint `u` of an edge in E′, the element moving it into V′
    pub gu: BTreeMap<usize, usize>,
}

impl OrbitData {
    /// V′ = least vertex of each orbit; E′ = in each edge orbit, the least
    /// sorted edge meeting V′.
    pub fn canonical(ga: &GroupAction) -> Result<Self> {
        let vprime: Vec<usize> = ga.orbits().iter().map(|o| o[0]).collect();
        let mut edge_orbit: BTreeMap<(usize, usize), (usize, usize)> = BTreeMap::new();
        for (u, v) in ga.graph.edges() {
            let mut best: Option<(usize, usize)> = None;
            for a in 0..ga.group.order() {
                let (x, y) = (ga.act(a, u), ga.act(a, v));
                let e = (x.min(y), x.max(y));
                if (vprime.contains(&e.0) || vprime.contains(&e.1)) && best.is_none_or(|b| e < b) {
                    best = Some(e);
                }
            }
            edge_orbit.insert((u, v), best.expect("every orbit meets V′"));
        }
        let mut reps: Vec<(usize, usize)> = edge_orbit.into_values().collect();
        reps.sort_unstable();
        reps.dedup();
        let eprime = reps.into_iter().map(|(a, b)| if vprime.contains(&a) { (a, b) } else { (b, a) }).collect();
        Self::from_choices(ga, vprime, eprime)
    }

    /// Validates user-chosen representatives and computes the `g_u`.
    pub fn from_choices(ga: &GroupAction, vprime: Vec<usize>, eprime: Vec<(usize, usize)>) -> Result<Self> {
        let bad = |m: String| Err(Error::InvalidOrbits(m));
        let orbits = ga.orbits();
        for orbit in &orbits {
            let hits = orbit.iter().filter(|v| vprime.contains(v)).count();
            if hits != 1 {
                return bad(format!("V′ must meet every orbit once, meets {:?} {hits} times", orbit));
            }
        }
        if vprime.len() != orbits.len() {
            return bad("V′ lists a vertex twice".into());
        }
        let mut covered: Vec<(usize, usize)> = Vec::new();
        for &(v, u) in &eprime {
            if !ga.graph.adjacent(v, u) {
                return bad(format!("{{{v}, {u}}} is not an edge"));
            }
            if !vprime.contains(&v) {
                return bad(format!("edge {{{v}, {u}}} does not start in V′"));
            }
            for a in 0..ga.group.order() {
                let (x, y) = (ga.act(a, v), ga.act(a, u));
                let e = (x.min(y), x.max(y));
                if covered.contains(&e) {
                    return bad(format!("edge {{{v}, {u}}} repeats an edge orbit"));
                }
                covered.push(e);
            }
        }
        if covered.len() != ga.graph.edge_count() {
            return bad("E′ misses an edge orbit".into());
        }
        let mut gu = BTreeMap::new();
        for &(v, u) in &eprime {
            for x in [v, u] {
                // the action is free, so exactly one element lands in V′;
                // among equal images the shortest word is kept
                let a = (0..ga.group.order())
                    .filter(|&a| vprime.contains(&ga.act(a, x)))
                    .min_by_key(|&a| ga.group.length(a))
                    .expect("V′ meets every orbit");
                gu.insert(x, a);
            }
        }
        Ok(OrbitData { vprime, eprime, gu })
    }

    /// `N₁ = max l(g_u)`.
    pub fn n1(&self, ga: &GroupAction) -> usize {
        self.gu.values().map(|&a| ga.group.length(a)).max().unwrap_or(0)
    }

    pub fn n(&self, ga: &GroupAction) -> usize {
        2 * self.n1(ga)
    }
}

/// The presentation of `J = W_K ⋊ G`: generators V′ then those of G, with
/// relators `v²`, `(v · g_u⁻¹ u′ g_u)²` for each `(v, u) ∈ E′` where
/// `u′ = g_u·u`, and the relators of G.
pub fn build_j(ga: &GroupAction, orbits: &OrbitData) -> Result<GroupPresentation> {
    let p = ga.group.presentation();
    let k = orbits.vprime.len();
    let mut generators: Vec<String> = orbits.vprime.iter().map(|&v| ga.graph.name(v).to_string()).collect();
    for g in p.generators() {
        if generators.contains(g) {
            return Err(Error::InvalidOrbits(format!("group generator {g} clashes with a vertex name")));
        }
        generators.push(g.clone());
    }
    let shift =
        |w: &Word| Word::from_letters(w.letters().iter().map(|l| Letter { generator: l.generator + k as u32, ..*l }));
    let index = |v: usize| orbits.vprime.iter().position(|&x| x == v).expect("vertex in V′");
    let mut relators: Vec<Word> = (0..k).map(|i| Word::power(i, 2)).collect();
    for &(v, u) in &orbits.eprime {
        let a = orbits.gu[&u];
        let g = shift(ga.group.rep(a));
        let u_prime = ga.act(a, u);
        let half = Word::power(index(v), 1).concat(&g.inverse()).concat(&Word::power(index(u_prime), 1)).concat(&g);
        relators.push(half.concat(&half));
    }
    relators.extend(p.relators().iter().map(shift));
    GroupPresentation::new(generators, relators)
}

/// Elements of `W_K ⋊ G` as (Tits normal form, group element).
pub type JElement = (CoxeterWord, usize);

/// Multiplication in `W_K ⋊ G`: `(c, g)(c', g') = (c · g(c'), g g')`.
pub struct Semidirect<'a> {
    pub action: &'a GroupAction,
    pub orbits: &'a OrbitData,
}

impl Semidirect<'_> {
    pub fn identity(&self) -> JElement {
        (Vec::new(), 0)
    }

    pub fn mul(&self, x: &JElement, y: &JElement) -> JElement {
        let mut c = x.0.clone();
        c.extend(y.0.iter().map(|&v| self.action.act(x.1, v)));
        (tits_reduce_unchecked(&self.action.graph, &c), self.action.group.mul(x.1, y.1))
    }

    /// Element of one letter of J's presentation.
    pub fn letter(&self, l: Letter) -> JElement {
        let k = self.orbits.vprime.len();
        if l.gen() < k {
            (vec![self.orbits.vprime[l.gen()]], 0)
        } else {
            let g = Letter { generator: (l.gen() - k) as u32, inverse: l.inverse };
            (Vec::new(), self.action.group.element(&Word(vec![g])))
        }
    }

    pub fn eval(&self, w: &Word) -> JElement {
        w.letters().iter().fold(self.identity(), |acc, &l| self.mul(&acc, &self.letter(l)))
    }
}

/// One side of a kernel experiment.
pub struct Instance {
    pub action: GroupAction,
    pub orbits: OrbitData,
}

impl Instance {
    pub fn canonical(action: GroupAction) -> Result<Self> {
        let report = check_action(&action);
        if !report.is_valid() {
            return Err(Error::InvalidAction(report.violations.join("; ")));
        }
        let orbits = OrbitData::canonical(&action)?;
        Ok(Instance { action, orbits })
    }

    /// JSON instance:
    /// `{graph, group, action: {gen: [image names]}, vprime?, eprime?}`.
    pub fn from_json(text: &str, budget: &Budget) -> Result<Self> {
        let doc: InstanceDoc = serde_json::from_str(text)?;
        let graph = SimpleGraph::from_doc(&doc.graph)?;
        let group = FiniteGroup::new(GroupPresentation::from_doc_value(doc.group)?, budget)?;
        let mut action = Vec::new();
        for g in group.presentation().generators() {
            let images = doc.action.get(g).ok_or_else(|| Error::InvalidAction(format!("no permutation for {g}")))?;
            action.push(images.iter().map(|n| graph.index_of(n)).collect::<Result<Vec<_>>>()?);
        }
        let action = GroupAction::new(graph, group, action)?;
        let report = check_action(&action);
        if !report.is_valid() {
            return Err(Error::InvalidAction(report.violations.join("; ")));
        }
        let orbits = match (doc.vprime, doc.eprime) {
            (None, None) => OrbitData::canonical(&action)?,
            (Some(vp), Some(ep)) => {
                let g = &action.graph;
                let vp = vp.iter().map(|n| g.index_of(n)).collect::<Result<Vec<_>>>()?;
                let ep = ep.iter().map(|[a, b]| Ok((g.index_of(a)?, g.index_of(b)?))).collect::<Result<Vec<_>>>()?;
                OrbitData::from_choices(&action, vp, ep)?
            }
            _ => return Err(Error::InvalidOrbits("vprime and eprime must be given together".into())),
        };
        Ok(Instance { action, orbits })
    }

    pub fn j_presentation(&self) -> Result<GroupPresentation> {
        build_j(&self.action, &self.orbits)
    }

    pub fn semidirect(&self) -> Semidirect<'_> {
        Semidirect { action: &self.action, orbits: &self.orbits }
    }
}

#[derive(Deserialize)]
struct InstanceDoc {
    graph: GraphDoc,
    group: Value,
    action: BTreeMap<String, Vec<String>>,
    vprime: Option<Vec<String>>,
    eprime: Option<Vec<[String; 2]>>,
}

/// The graph map `K(S) → K(T)` determined by matching V′ by vertex name and
/// equivariance; fails unless it is a well-defined equivariant graph map.
pub fn vertex_map(s: &Instance, t: &Instance) -> Result<Vec<usize>> {
    let (gs, gt) = (&s.action.graph, &t.action.graph);
    let bad = |m: String| Err(Error::InvalidOrbits(m));
    let mut map = vec![usize::MAX; gs.vertex_count()];
    for &v in &s.orbits.vprime {
        map[v] = gt.index_of(gs.name(v))?;
    }
    let phi = |a: usize| t.action.group.element(s.action.group.rep(a));
    for u in 0..gs.vertex_count() {
        let a = (0..s.action.group.order()).find(|&a| s.orbits.vprime.contains(&s.action.act(a, u))).unwrap();
        let v = s.action.act(a, u);
        // u = a⁻¹·v
        let inv = (0..s.action.group.order()).find(|&b| s.action.group.mul(a, b) == 0).unwrap();
        map[u] = t.action.act(phi(inv), map[v]);
    }
    for u in 0..gs.vertex_count() {
        for g in 0..s.action.action.len() {
            let x = s.action.group.element(&Word::power(g, 1));
            if map[s.action.act(x, u)] != t.action.act(phi(x), map[u]) {
                return bad(format!("vertex map is not equivariant at {}", gs.name(u)));
            }
        }
    }
    for (u, v) in gs.edges() {
        if !gt.adjacent(map[u], map[v]) {
            return bad(format!("edge {{{}, {}}} is not mapped to an edge", gs.name(u), gs.name(v)));
        }
    }
    Ok(map)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct KernelRecord {
    pub word: String,
    pub length: usize,
    /// the image of the word in G(S), written as a word
    pub g: String,
    pub g_length: usize,
    pub holds: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SemikerReport {
    pub n1: usize,
    pub n: usize,
    pub max_len: usize,
    pub elements: usize,
    /// kernel elements of length at most N, which the statement leaves alone
    pub short_kernel: usize,
    /// length of the shortest nontrivial kernel element of G(S) → G(T)
    pub group_kernel_length: Option<usize>,
    pub records: Vec<KernelRecord>,
    pub counterexamples: usize,
}

/// Enumerates the ball of radius `max_len` in J(S) and checks every kernel
/// element of `J(S) → J(T)` longer than N for a nontrivial kernel element of
/// `G(S) → G(T)` that is no longer.
pub fn semiker_experiment(s: &Instance, t: &Instance, max_len: usize) -> Result<SemikerReport> {
    if s.action.group.presentation().generators() != t.action.group.presentation().generators() {
        return Err(Error::GeneratorMismatch);
    }
    let (gs, gt) = (&s.action.group, &t.action.group);
    let phi = |a: usize| gt.element(gs.rep(a));
    for r in gs.presentation().relators() {
        if gt.element(r) != 0 {
            return Err(Error::InvalidAction("G(S) → G(T) does not respect relators".into()));
        }
    }
    let pi = vertex_map(s, t)?;
    let j = s.j_presentation()?;
    let semi = s.semidirect();
    let n = s.orbits.n(&s.action);
    let group_kernel_length = (1..gs.order()).filter(|&a| phi(a) == 0).map(|a| gs.length(a)).min();

    let letters: Vec<(Letter, JElement)> =
        (0..2 * j.generator_count()).map(Letter::from_index).map(|l| (l, semi.letter(l))).collect();
    let mut seen: HashMap<JElement, ()> = HashMap::from([(semi.identity(), ())]);
    let mut queue = VecDeque::from([(semi.identity(), Word::empty())]);
    let mut records = Vec::new();
    let mut short_kernel = 0;
    let mut elements = 1;
    while let Some((x, w)) = queue.pop_front() {
        if w.len() == max_len {
            continue;
        }
        for (l, y) in &letters {
            let z = semi.mul(&x, y);
            if seen.insert(z.clone(), ()).is_some() {
                continue;
            }
            elements += 1;
            let mut zw = w.clone();
            zw.push(*l);
            let image: Vec<usize> = z.0.iter().map(|&v| pi[v]).collect();
            let in_kernel = tits_reduce_unchecked(&t.action.graph, &image).is_empty() && phi(z.1) == 0;
            if in_kernel {
                if zw.len() <= n {
                    short_kernel += 1;
                } else {
                    let (g_length, g, holds) = if z.1 != 0 {
                        (gs.length(z.1), gs.presentation().format_word(gs.rep(z.1)), gs.length(z.1) <= zw.len())
                    } else {
                        // the image in G(S) is trivial; any short kernel element will do
                        match (1..gs.order()).filter(|&a| phi(a) == 0).min_by_key(|&a| gs.length(a)) {
                            Some(a) => {
                                (gs.length(a), gs.presentation().format_word(gs.rep(a)), gs.length(a) <= zw.len())
                            }
                            None => (0, "1".into(), false),
                        }
                    };
                    records.push(KernelRecord { word: j.format_word(&zw), length: zw.len(), g, g_length, holds });
                }
            }
            queue.push_back((z, zw));
        }
    }
    let counterexamples = records.iter().filter(|r| !r.holds).count();
    Ok(SemikerReport {
        n1: s.orbits.n1(&s.action),
        n,
        max_len,
        elements,
        short_kernel,
        group_kernel_length,
        records,
        counterexamples,
    })
}

/// Cycle graph with `Z/m` acting by rotation through `step`.
pub fn rotation_instance(n: usize, m: usize, step: usize, budget: &Budget) -> Result<GroupAction> {
    let graph = SimpleGraph::cycle(n);
    let group = FiniteGroup::new(GroupPresentation::new(vec!["t".into()], vec![Word::power(0, m as i64)])?, budget)?;
    GroupAction::new(graph, group, vec![(0..n).map(|v| (v + step) % n).collect()])
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::word_engine::Budget;

    fn b() -> Budget {
        Budget::default()
    }

    #[test]
    fn twelve_cycle_with_z3() {
        let ga = rotation_instance(12, 3, 4, &b()).unwrap();
        let report = check_action(&ga);
        assert!(report.is_valid(), "{:?}", report.violations);
        assert_eq!(report.min_orbit_distance, Some(4));
        let orbits = OrbitData::canonical(&ga).unwrap();
        assert_eq!(orbits.vprime, vec![0, 1, 2, 3]);
        assert_eq!(orbits.eprime, vec![(0, 1), (0, 11), (1, 2), (2, 3)]);
        assert_eq!(orbits.n1(&ga), 1);
        assert_eq!(orbits.n(&ga), 2);
        let j = build_j(&ga, &orbits).unwrap();
        assert_eq!(j.relators().len(), 9);
        assert!(j.relators().iter().all(|r| r.len() <= 4 * orbits.n1(&ga) + 4));
    }

    #[test]
    fn crowded_orbits_are_rejected() {
        let ga = rotation_instance(6, 3, 2, &b()).unwrap();
        let report = check_action(&ga);
        assert!(!report.is_valid());
        assert_eq!(report.min_orbit_distance, Some(2));
    }

    #[test]
    fn trivial_action() {
        let g = SimpleGraph::numbered(2, &[(0, 1)]).unwrap();
        let group = FiniteGroup::new(GroupPresentation::new(vec![], vec![]).unwrap(), &b()).unwrap();
        let ga = GroupAction::new(g, group, vec![]).unwrap();
        assert!(check_action(&ga).is_valid());
        let orbits = OrbitData::canonical(&ga).unwrap();
        assert_eq!(orbits.n1(&ga), 0);
        let j = build_j(&ga, &orbits).unwrap();
        // the Coxeter group of an edge
        assert!(j.same_group_data(&crate::presentation::build_racg(&ga.graph)));
    }

    #[test]
    fn semidirect_model_satisfies_j() {
        let ga = rotation_instance(12, 3, 4, &b()).unwrap();
        let inst = Instance::canonical(ga).unwrap();
        let j = inst.j_presentation().unwrap();
        let semi = inst.semidirect();
        for r in j.relators() {
            assert_eq!(semi.eval(r), semi.identity(), "{}", j.format_word(r));
        }
        // retraction onto G after the inclusion is the identity
        let t = Word::power(4, 1);
        assert_eq!(semi.eval(&t).0, Vec::<usize>::new());
        assert_eq!(semi.eval(&t).1, inst.action.group.element(&Word::power(0, 1)));
    }

    #[test]
    fn kernel_transfer_on_cycles() {
        let s = Instance::canonical(rotation_instance(24, 6, 4, &b()).unwrap()).unwrap();
        let t = Instance::canonical(rotation_instance(12, 3, 4, &b()).unwrap()).unwrap();
        assert_eq!(s.orbits.n1(&s.action), 1);
        assert!(s.orbits.eprime.contains(&(0, 23)));
        let report = semiker_experiment(&s, &t, 6).unwrap();
        assert_eq!(report.counterexamples, 0);
        assert!(!report.records.is_empty());
        assert_eq!(report.group_kernel_length, Some(3));
        let same = semiker_experiment(&t, &t, 5).unwrap();
        assert!(same.records.is_empty());
        assert_eq!(same.short_kernel, 0);
    }
}
