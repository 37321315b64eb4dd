//! Exact word problems for right-angled Coxeter and Artin groups.
//!
//! Both engines first reduce a word by cancelling letters that can be
//! shuffled next to their inverse through commuting letters, then pick the
//! lexicographically least word among all rearrangements by commutation.
//! Equal group elements get identical normal forms.

use crate::complexes::FlagComplex;
use crate::error::{Error, Result};
use crate::graph::SimpleGraph;
use crate::word::{Letter, Word};

/// A word in the involutive vertex generators of a right-angled Coxeter group.
pub type CoxeterWord = Vec<usize>;

/// Parses vertex names into a Coxeter word.
pub fn coxeter_word(graph: &SimpleGraph, names: &[&str]) -> Result<CoxeterWord> {
    names.iter().map(|n| graph.index_of(n)).collect()
}

/// Parses `(vertex name, ±1)` pairs into an Artin word over the vertices.
pub fn artin_word(graph: &SimpleGraph, letters: &[(&str, i8)]) -> Result<Word> {
    letters
        .iter()
        .map(|&(n, e)| {
            if e != 1 && e != -1 {
                return Err(Error::MalformedWord(format!("exponent {e}")));
            }
            Ok(Letter::new(graph.index_of(n)?, e))
        })
        .collect::<Result<Vec<_>>>()
        .map(Word)
}

fn check_vertices(graph: &SimpleGraph, vertices: impl Iterator<Item = usize>) -> Result<()> {
    for v in vertices {
        if v >= graph.vertex_count() {
            return Err(Error::UnknownVertex(v.to_string()));
        }
    }
    Ok(())
}

/// Cancels letters against earlier letters reachable through commuting
/// letters. `cancels(a, b)` says `a b = 1`.
fn reduce_partially_commutative(
    graph: &SimpleGraph,
    letters: impl IntoIterator<Item = Letter>,
    cancels: impl Fn(Letter, Letter) -> bool,
) -> Vec<Letter> {
    let mut out: Vec<Letter> = Vec::new();
    'next: for x in letters {
        for j in (0..out.len()).rev() {
            let y = out[j];
            if cancels(y, x) {
                out.remove(j);
                continue 'next;
            }
            if y.gen() != x.gen() && !graph.adjacent(y.gen(), x.gen()) {
                break;
            }
        }
        out.push(x);
    }
    out
}

/// Lexicographically least rearrangement of `letters` by swapping adjacent
/// commuting letters (distinct adjacent vertices).
fn least_linearization(graph: &SimpleGraph, mut letters: Vec<Letter>) -> Vec<Letter> {
    let mut out = Vec::with_capacity(letters.len());
    while !letters.is_empty() {
        let mut best: Option<usize> = None;
        for i in 0..letters.len() {
            let x = letters[i];
            let free = letters[..i].iter().all(|y| y.gen() != x.gen() && graph.adjacent(y.gen(), x.gen()));
            if free && best.is_none_or(|b| x < letters[b]) {
                best = Some(i);
            }
        }
        out.push(letters.remove(best.expect("the first letter is always available")));
    }
    out
}

/// Tits normal form in the right-angled Coxeter group W_K.
pub fn tits_reduce(graph: &SimpleGraph, w: &[usize]) -> Result<CoxeterWord> {
    check_vertices(graph, w.iter().copied())?;
    Ok(tits_reduce_unchecked(graph, w))
}

pub(crate) fn tits_reduce_unchecked(graph: &SimpleGraph, w: &[usize]) -> CoxeterWord {
    let reduced = reduce_partially_commutative(graph, w.iter().map(|&v| Letter::pos(v)), |a, b| a.gen() == b.gen());
    least_linearization(graph, reduced).into_iter().map(Letter::gen).collect()
}

/// Normal form in the right-angled Artin group A_L.
pub fn raag_normal_form(complex: &FlagComplex, w: &Word) -> Result<Word> {
    raag_normal_form_on_graph(complex.graph(), w)
}

pub fn raag_normal_form_on_graph(graph: &SimpleGraph, w: &Word) -> Result<Word> {
    check_vertices(graph, w.letters().iter().map(|l| l.gen()))?;
    Ok(raag_normal_form_unchecked(graph, w))
}

pub(crate) fn raag_normal_form_unchecked(graph: &SimpleGraph, w: &Word) -> Word {
    let reduced = reduce_partially_commutative(graph, w.letters().iter().copied(), |a, b| a == b.inv());
    Word(least_linearization(graph, reduced))
}

/// Image in A_L of a word over the directed-edge generators of L, with the
/// edge `x→y` sent to `x y⁻¹`, in normal form.
pub fn bb_image(complex: &FlagComplex, w: &Word) -> Result<Word> {
    let edges = complex.directed_edges();
    let mut image = Word::empty();
    for l in w.letters() {
        let &(x, y) = edges.get(l.gen()).ok_or_else(|| Error::UnknownGenerator(format!("edge #{}", l.gen())))?;
        let pair = if l.inverse { [Letter::pos(y), Letter::neg(x)] } else { [Letter::pos(x), Letter::neg(y)] };
        image.push(pair[0]);
        image.push(pair[1]);
    }
    Ok(raag_normal_form_unchecked(complex.graph(), &image))
}

/// The retraction W_K → W_{K'} killing every vertex outside K', followed by
/// the Tits normal form. `sub` lists the vertices of K' by name; the
/// result is expressed over the vertex indices of K.
pub fn retract(graph: &SimpleGraph, sub: &SimpleGraph, w: &[usize]) -> Result<CoxeterWord> {
    check_vertices(graph, w.iter().copied())?;
    let keep = sub.names().iter().map(|n| graph.index_of(n)).collect::<Result<Vec<_>>>()?;
    let induced = graph.induced(&keep);
    if induced != *sub {
        return Err(Error::NotInduced(format!(
            "{} edges given, {} in the induced subgraph",
            sub.edge_count(),
            induced.edge_count()
        )));
    }
    let local: Vec<usize> = w.iter().filter_map(|v| keep.iter().position(|k| k == v)).collect();
    Ok(tits_reduce_unchecked(sub, &local).into_iter().map(|i| keep[i]).collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::complexes::flag_completion;
    use crate::complexes::samples::*;
    use rand::seq::SliceRandom;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn edge_uv() -> SimpleGraph {
        SimpleGraph::new(&["u", "v"], &[("u", "v")]).unwrap()
    }

    #[test]
    fn tits_examples() {
        let k = edge_uv();
        let w = coxeter_word(&k, &["u", "v", "u", "v"]).unwrap();
        assert!(tits_reduce(&k, &w).unwrap().is_empty());
        let apart = SimpleGraph::new(&["u", "v"], &[]).unwrap();
        let w = coxeter_word(&apart, &["u", "v", "u", "v"]).unwrap();
        assert_eq!(tits_reduce(&apart, &w).unwrap(), w);
        assert!(tits_reduce(&apart, &[1, 1]).unwrap().is_empty());
        assert!(coxeter_word(&k, &["x"]).is_err());
        assert!(tits_reduce(&k, &[7]).is_err());
    }

    #[test]
    fn raag_examples() {
        let g = SimpleGraph::new(&["x", "y"], &[("x", "y")]).unwrap();
        let w = artin_word(&g, &[("x", 1), ("y", 1), ("x", -1), ("y", -1)]).unwrap();
        assert!(raag_normal_form_on_graph(&g, &w).unwrap().is_empty());
        let free = SimpleGraph::new(&["x", "y"], &[]).unwrap();
        let w = artin_word(&free, &[("x", 1), ("y", 1), ("x", -1)]).unwrap();
        assert_eq!(raag_normal_form_on_graph(&free, &w).unwrap(), w);
        let k3 = SimpleGraph::new(&["x", "y", "z"], &[("x", "y"), ("y", "z"), ("x", "z")]).unwrap();
        let w = artin_word(&k3, &[("z", 1), ("x", 1), ("y", 1), ("x", 1)]).unwrap();
        let expect = artin_word(&k3, &[("x", 1), ("x", 1), ("y", 1), ("z", 1)]).unwrap();
        assert_eq!(raag_normal_form_on_graph(&k3, &w).unwrap(), expect);
    }

    #[test]
    fn bb_examples() {
        let tri = simplex(2);
        let e = |u, v| tri.directed_edge_index(u, v).unwrap();
        let img = bb_image(&tri, &Word(vec![Letter::pos(e(0, 1))])).unwrap();
        assert_eq!(img, Word(vec![Letter::pos(0), Letter::neg(1)]));
        let edge_rel = Word(vec![Letter::pos(e(0, 1)), Letter::pos(e(1, 0))]);
        assert!(bb_image(&tri, &edge_rel).unwrap().is_empty());
        let triangle = Word(vec![Letter::pos(e(0, 1)), Letter::pos(e(1, 2)), Letter::pos(e(2, 0))]);
        assert!(bb_image(&tri, &triangle).unwrap().is_empty());
        assert!(bb_image(&tri, &triangle.inverse()).unwrap().is_empty());
    }

    #[test]
    fn retract_examples() {
        // path u - x - w with K' = {u, w} (no edge)
        let k = SimpleGraph::new(&["u", "x", "w"], &[("u", "x"), ("x", "w")]).unwrap();
        let sub = SimpleGraph::new(&["u", "w"], &[]).unwrap();
        let (u, x, w) = (0, 1, 2);
        assert!(retract(&k, &sub, &[u, x, u]).unwrap().is_empty());
        assert!(retract(&k, &sub, &[x, x, x]).unwrap().is_empty());
        assert_eq!(retract(&k, &sub, &[u, w, u]).unwrap(), vec![u, w, u]);
        let wrong = SimpleGraph::new(&["u", "w"], &[("u", "w")]).unwrap();
        assert!(matches!(retract(&k, &wrong, &[u]), Err(Error::NotInduced(_))));
    }

    /// Applies random deletions reachable by commutation until none remain.
    fn random_reduce(graph: &SimpleGraph, w: &[usize], rng: &mut ChaCha8Rng) -> Vec<usize> {
        let mut w = w.to_vec();
        loop {
            let mut options = Vec::new();
            for i in 0..w.len() {
                for j in i + 1..w.len() {
                    if w[i] != w[j] {
                        continue;
                    }
                    if w[i + 1..j].iter().all(|&m| m != w[i] && graph.adjacent(m, w[i])) {
                        options.push((i, j));
                    }
                    break;
                }
            }
            let Some(&(i, j)) = options.choose(rng) else { break };
            w.remove(j);
            w.remove(i);
            // random commutation shuffles
            for _ in 0..w.len() {
                if w.len() < 2 {
                    break;
                }
                let k = rng.gen_range(0..w.len() - 1);
                if w[k] != w[k + 1] && graph.adjacent(w[k], w[k + 1]) {
                    w.swap(k, k + 1);
                }
            }
        }
        w
    }

    #[test]
    fn tits_reduction_is_confluent() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let graphs = [SimpleGraph::cycle(5), SimpleGraph::path(4), edge_uv(), SimpleGraph::complete(4)];
        for g in &graphs {
            for _ in 0..300 {
                let len = rng.gen_range(0..12);
                let w: Vec<usize> = (0..len).map(|_| rng.gen_range(0..g.vertex_count())).collect();
                let canonical = tits_reduce(g, &w).unwrap();
                for _ in 0..3 {
                    let other = random_reduce(g, &w, &mut rng);
                    assert_eq!(tits_reduce(g, &other).unwrap(), canonical);
                    assert_eq!(other.len(), canonical.len(), "reduced length is unique");
                }
            }
        }
    }

    #[test]
    fn retract_is_identity_on_subgroup() {
        let k = SimpleGraph::cycle(6);
        let keep = [0usize, 1, 2, 4];
        let sub = k.induced(&keep);
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for _ in 0..200 {
            let len = rng.gen_range(0..10);
            let w: Vec<usize> = (0..len).map(|_| keep[rng.gen_range(0..keep.len())]).collect();
            assert_eq!(retract(&k, &sub, &w).unwrap(), tits_reduce(&k, &w).unwrap());
        }
    }

    #[test]
    fn bb_kills_edge_and_triangle_relators() {
        let oct = octahedron();
        let p = crate::presentation::build_p(&oct, &Default::default(), &[0].into_iter().collect()).unwrap();
        for r in p.relators() {
            assert!(bb_image(&oct, r).unwrap().is_empty());
        }
        let _ = flag_completion(oct.graph());
    }
}
