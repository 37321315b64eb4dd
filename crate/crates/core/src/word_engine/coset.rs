//! Todd–Coxeter coset enumeration.
//!
//! Felsch-style: the first undefined table entry (row-major over live
//! cosets) is filled with a new coset, and every new entry is pushed on a
//! deduction stack whose relator cycles are scanned immediately.
//! Coincidences are merged through union-find.

use std::collections::VecDeque;

use serde::{Deserialize, Serialize};

use super::Budget;
use crate::presentation::GroupPresentation;
use crate::word::Word;

const UNDEF: u32 = u32::MAX;

/// A coset table over the columns `g, g⁻¹` for each generator `g`
/// (column `2g` and `2g + 1`). Coset 0 is the subgroup itself.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct CosetTable {
    pub generator_count: usize,
    pub rows: Vec<Vec<u32>>,
    pub complete: bool,
}

impl CosetTable {
    pub fn index(&self) -> usize {
        self.rows.len()
    }

    /// Coset reached from `start` by reading `w`, if every step is defined.
    pub fn trace(&self, start: usize, w: &Word) -> Option<usize> {
        let mut c = start;
        for l in w.letters() {
            let next = *self.rows.get(c)?.get(l.index())?;
            if next == UNDEF {
                return None;
            }
            c = next as usize;
        }
        Some(c)
    }

    /// Permutation images `g ↦ [coset · g]` of each generator.
    pub fn permutations(&self) -> Vec<Vec<u32>> {
        (0..self.generator_count).map(|g| self.rows.iter().map(|r| r[2 * g]).collect()).collect()
    }

    /// Checks that the table is complete, that inverse columns agree and that
    /// every relator closes at every coset and every subgroup generator
    /// closes at coset 0.
    pub fn is_valid_for(&self, p: &GroupPresentation, subgroup: &[Word]) -> Result<(), String> {
        if !self.complete || self.generator_count != p.generator_count() {
            return Err("table is incomplete or has the wrong width".into());
        }
        let n = self.rows.len() as u32;
        for (c, row) in self.rows.iter().enumerate() {
            if row.len() != 2 * self.generator_count {
                return Err(format!("row {c} has the wrong width"));
            }
            for (col, &d) in row.iter().enumerate() {
                if d >= n || self.rows[d as usize][col ^ 1] != c as u32 {
                    return Err(format!("entry ({c}, {col}) is not invertible"));
                }
            }
        }
        for r in p.relators() {
            for c in 0..self.rows.len() {
                if self.trace(c, r) != Some(c) {
                    return Err(format!("relator fails at coset {c}"));
                }
            }
        }
        for h in subgroup {
            if self.trace(0, h) != Some(0) {
                return Err("subgroup generator moves coset 0".into());
            }
        }
        Ok(())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct BudgetExceeded;

struct Enumerator<'a> {
    cols: usize,
    table: Vec<u32>,
    parent: Vec<u32>,
    /// relator cycles grouped by their first column
    cycles: Vec<Vec<Vec<usize>>>,
    deductions: Vec<(u32, usize)>,
    merges: VecDeque<u32>,
    budget: &'a Budget,
    processed: usize,
    merge_count: usize,
    deduction_count: usize,
}

impl<'a> Enumerator<'a> {
    fn new(p: &GroupPresentation, budget: &'a Budget) -> Self {
        let cols = 2 * p.generator_count();
        let mut cycles = vec![Vec::new(); cols];
        let mut seen = std::collections::HashSet::new();
        for r in p.relators() {
            let r = r.cyclic_reduce();
            for base in [r.clone(), r.inverse()] {
                for k in 0..base.len() {
                    let rot: Vec<usize> = base.rotate(k).letters().iter().map(|l| l.index()).collect();
                    if seen.insert(rot.clone()) {
                        cycles[rot[0]].push(rot);
                    }
                }
            }
        }
        let mut e = Enumerator {
            cols,
            table: Vec::new(),
            parent: Vec::new(),
            cycles,
            deductions: Vec::new(),
            merges: VecDeque::new(),
            budget,
            processed: 0,
            merge_count: 0,
            deduction_count: 0,
        };
        e.new_coset().expect("first coset fits any budget");
        e
    }

    fn new_coset(&mut self) -> Result<u32, BudgetExceeded> {
        let n = self.parent.len();
        if n >= self.budget.max_cosets {
            return Err(BudgetExceeded);
        }
        self.parent.push(n as u32);
        self.table.extend(std::iter::repeat_n(UNDEF, self.cols));
        Ok(n as u32)
    }

    #[inline]
    fn get(&self, c: u32, col: usize) -> u32 {
        self.table[c as usize * self.cols + col]
    }

    #[inline]
    fn set(&mut self, c: u32, col: usize, d: u32) {
        self.table[c as usize * self.cols + col] = d;
    }

    fn find(&mut self, mut c: u32) -> u32 {
        while self.parent[c as usize] != c {
            let p = self.parent[c as usize];
            self.parent[c as usize] = self.parent[p as usize];
            c = p;
        }
        c
    }

    fn is_live(&self, c: u32) -> bool {
        self.parent[c as usize] == c
    }

    fn define(&mut self, c: u32, col: usize) -> Result<u32, BudgetExceeded> {
        let d = self.new_coset()?;
        self.set(c, col, d);
        self.set(d, col ^ 1, c);
        self.deductions.push((c, col));
        Ok(d)
    }

    fn merge(&mut self, a: u32, b: u32) {
        let (a, b) = (self.find(a), self.find(b));
        if a == b {
            return;
        }
        let (keep, drop) = (a.min(b), a.max(b));
        self.parent[drop as usize] = keep;
        self.merges.push_back(drop);
        self.merge_count += 1;
    }

    fn coincidence(&mut self, a: u32, b: u32) {
        self.merge(a, b);
        while let Some(dead) = self.merges.pop_front() {
            for col in 0..self.cols {
                let d = self.get(dead, col);
                if d == UNDEF {
                    continue;
                }
                if self.get(d, col ^ 1) == dead {
                    self.set(d, col ^ 1, UNDEF);
                }
                let mu = self.find(dead);
                let nu = self.find(d);
                let mu_x = self.get(mu, col);
                if mu_x != UNDEF {
                    self.merge(nu, mu_x);
                } else {
                    let nu_inv = self.get(nu, col ^ 1);
                    if nu_inv != UNDEF {
                        self.merge(mu, nu_inv);
                    } else {
                        self.set(mu, col, nu);
                        self.set(nu, col ^ 1, mu);
                        self.deductions.push((mu, col));
                    }
                }
            }
        }
    }

    /// Scans `cycle` at coset `c`, deducing a single missing entry or
    /// recording a coincidence when the scan closes inconsistently.
    fn scan(&mut self, c: u32, cycle: &[usize]) {
        let len = cycle.len();
        let mut f = c;
        let mut i = 0;
        while i < len {
            let next = self.get(f, cycle[i]);
            if next == UNDEF {
                break;
            }
            f = next;
            i += 1;
        }
        if i == len {
            if f != c {
                self.coincidence(f, c);
            }
            return;
        }
        let mut b = c;
        let mut j = len;
        while j > i {
            let prev = self.get(b, cycle[j - 1] ^ 1);
            if prev == UNDEF {
                break;
            }
            b = prev;
            j -= 1;
        }
        if j == i {
            if f != b {
                self.coincidence(f, b);
            }
        } else if j == i + 1 {
            self.set(f, cycle[i], b);
            self.set(b, cycle[i] ^ 1, f);
            self.deductions.push((f, cycle[i]));
            self.deduction_count += 1;
        }
    }

    /// Defines cosets along `w` from coset 0 so that `w` closes there.
    fn close_subgroup_word(&mut self, w: &[usize]) -> Result<(), BudgetExceeded> {
        if w.is_empty() {
            return Ok(());
        }
        let mut f = 0u32;
        for &col in &w[..w.len() - 1] {
            let f_live = self.find(f);
            let next = self.get(f_live, col);
            f = if next == UNDEF { self.define(f_live, col)? } else { next };
        }
        let f = self.find(f);
        let last = w[w.len() - 1];
        let target = self.get(f, last);
        let zero = self.find(0);
        if target == UNDEF {
            if self.get(zero, last ^ 1) == UNDEF {
                self.set(f, last, zero);
                self.set(zero, last ^ 1, f);
                self.deductions.push((f, last));
            } else {
                let other = self.get(zero, last ^ 1);
                self.coincidence(f, other);
            }
        } else if self.find(target) != zero {
            self.coincidence(target, zero);
        }
        self.process()
    }

    fn process(&mut self) -> Result<(), BudgetExceeded> {
        while let Some((c, col)) = self.deductions.pop() {
            self.processed += 1;
            if self.processed > self.budget.max_deductions {
                return Err(BudgetExceeded);
            }
            if !self.is_live(c) {
                continue;
            }
            let n = self.cycles[col].len();
            for k in 0..n {
                if !self.is_live(c) {
                    break;
                }
                let cycle = std::mem::take(&mut self.cycles[col][k]);
                self.scan(c, &cycle);
                self.cycles[col][k] = cycle;
            }
            let d = self.get(c, col);
            if d != UNDEF && self.is_live(d) {
                let inv = col ^ 1;
                let n = self.cycles[inv].len();
                for k in 0..n {
                    if !self.is_live(d) {
                        break;
                    }
                    let cycle = std::mem::take(&mut self.cycles[inv][k]);
                    self.scan(d, &cycle);
                    self.cycles[inv][k] = cycle;
                }
            }
        }
        Ok(())
    }

    /// Scans every relator cycle at every live coset; returns whether the
    /// pass deduced anything or found a coincidence.
    fn lookahead(&mut self) -> Result<bool, BudgetExceeded> {
        let before = (self.merge_count, self.deduction_count);
        for c in 0..self.parent.len() as u32 {
            for col in 0..self.cols {
                for k in 0..self.cycles[col].len() {
                    if !self.is_live(c) {
                        break;
                    }
                    let cycle = std::mem::take(&mut self.cycles[col][k]);
                    self.scan(c, &cycle);
                    self.cycles[col][k] = cycle;
                }
            }
        }
        self.process()?;
        Ok((self.merge_count, self.deduction_count) != before)
    }

    fn first_gap(&self, from: usize) -> Option<(u32, usize)> {
        (from..self.parent.len())
            .map(|c| c as u32)
            .filter(|&c| self.is_live(c))
            .find_map(|c| (0..self.cols).find(|&col| self.get(c, col) == UNDEF).map(|col| (c, col)))
    }

    fn run(&mut self, subgroup: &[Word]) -> Result<(), BudgetExceeded> {
        for h in subgroup {
            let cols: Vec<usize> = h.free_reduce().letters().iter().map(|l| l.index()).collect();
            self.close_subgroup_word(&cols)?;
        }
        self.process()?;
        loop {
            let mut cursor = 0usize;
            while let Some((c, col)) = self.first_gap(cursor) {
                cursor = c as usize;
                let merges = self.merge_count;
                self.define(c, col)?;
                self.process()?;
                if self.merge_count != merges {
                    // a coincidence may clear entries behind the cursor
                    cursor = 0;
                }
            }
            if !self.lookahead()? {
                break;
            }
        }
        Ok(())
    }

    fn compact(mut self, generator_count: usize) -> CosetTable {
        let total = self.parent.len();
        let mut renumber = vec![UNDEF; total];
        let mut next = 0u32;
        for c in 0..total {
            if self.is_live(c as u32) {
                renumber[c] = next;
                next += 1;
            }
        }
        let mut rows = Vec::with_capacity(next as usize);
        for c in 0..total as u32 {
            if !self.is_live(c) {
                continue;
            }
            let mut row = Vec::with_capacity(self.cols);
            for col in 0..self.cols {
                let d = self.get(c, col);
                row.push(if d == UNDEF { UNDEF } else { renumber[self.find(d) as usize] });
            }
            rows.push(row);
        }
        CosetTable { generator_count, rows, complete: true }
    }
}

/// Enumerates the cosets of the subgroup generated by `subgroup` in the
/// group presented by `p`.
///
/// The run is deterministic in `(p, subgroup, budget)`. `BudgetExceeded`
/// means the enumeration did not close within the coset or deduction limit.
pub fn todd_coxeter(p: &GroupPresentation, subgroup: &[Word], budget: &Budget) -> Result<CosetTable, BudgetExceeded> {
    let mut e = Enumerator::new(p, budget);
    e.run(subgroup)?;
    Ok(e.compact(p.generator_count()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::SimpleGraph;
    use crate::presentation::{build_racg, GroupPresentation};
    use crate::word::Word;

    fn cyclic(n: i64) -> GroupPresentation {
        GroupPresentation::new(vec!["a".into()], vec![Word::power(0, n)]).unwrap()
    }

    #[test]
    fn cyclic_group_has_n_cosets() {
        for n in 1..=12 {
            let t = todd_coxeter(&cyclic(n), &[], &Budget::default()).unwrap();
            assert_eq!(t.index(), n as usize);
            assert!(t.is_valid_for(&cyclic(n), &[]).is_ok());
        }
    }

    #[test]
    fn klein_four() {
        let p = build_racg(&SimpleGraph::complete(2));
        let t = todd_coxeter(&p, &[], &Budget::default()).unwrap();
        assert_eq!(t.index(), 4);
    }

    #[test]
    fn free_group_exceeds_budget() {
        let p = GroupPresentation::free(vec!["a".into(), "b".into()]);
        let budget = Budget { max_cosets: 100, ..Budget::default() };
        assert_eq!(todd_coxeter(&p, &[], &budget), Err(BudgetExceeded));
    }

    #[test]
    fn known_orders() {
        // S3 = <a, b | a^2, b^3, (ab)^2>
        let s3 = GroupPresentation::new(
            vec!["a".into(), "b".into()],
            vec![Word::power(0, 2), Word::power(1, 3), Word::from_pairs(&[(0, 1), (1, 1), (0, 1), (1, 1)])],
        )
        .unwrap();
        assert_eq!(todd_coxeter(&s3, &[], &Budget::default()).unwrap().index(), 6);
        // index of <b> in S3 is 2
        let t = todd_coxeter(&s3, &[Word::power(1, 1)], &Budget::default()).unwrap();
        assert_eq!(t.index(), 2);
        assert!(t.is_valid_for(&s3, &[Word::power(1, 1)]).is_ok());
        // A5 = <a, b | a^2, b^3, (ab)^5>
        let mut ab5 = Vec::new();
        for _ in 0..5 {
            ab5.push((0, 1));
            ab5.push((1, 1));
        }
        let a5 = GroupPresentation::new(
            vec!["a".into(), "b".into()],
            vec![Word::power(0, 2), Word::power(1, 3), Word::from_pairs(&ab5)],
        )
        .unwrap();
        assert_eq!(todd_coxeter(&a5, &[], &Budget::default()).unwrap().index(), 60);
        // RACG of complete graphs: (Z/2)^n
        for n in 1..=5 {
            let p = build_racg(&SimpleGraph::complete(n));
            assert_eq!(todd_coxeter(&p, &[], &Budget::default()).unwrap().index(), 1 << n);
        }
    }

    #[test]
    fn enumeration_is_deterministic() {
        let p = build_racg(&SimpleGraph::complete(3));
        let a = todd_coxeter(&p, &[], &Budget::default()).unwrap();
        let b = todd_coxeter(&p, &[], &Budget::default()).unwrap();
        assert_eq!(a, b);
    }
}
