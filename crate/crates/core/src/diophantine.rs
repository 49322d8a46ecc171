//! The integer side of the shrinking/preserving criteria: solutions of
//! `Σ k_i x_i = m` in non-negative integers, covering families, the
//! all-shrinking-maps-preserve condition, Frobenius numbers and eigenvalue
//! selection.

use std::collections::HashMap;

use serde::Serialize;

use crate::error::{Error, Result};

/// All non-negative solutions of `Σ k_i x_i = m`, lexicographically sorted.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SolutionSet {
    pub ks: Vec<usize>,
    pub m: usize,
    pub solutions: Vec<Vec<usize>>,
}

impl SolutionSet {
    pub fn exists(&self) -> bool {
        !self.solutions.is_empty()
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Verdict {
    Yes,
    No,
    Undetermined,
}

/// Outcome of a decision procedure. `witness` holds one solution vector per
/// target block.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Decision {
    pub verdict: Verdict,
    pub witness: Option<Vec<Vec<usize>>>,
    pub note: String,
    /// Source index (0-based) left uncovered by the witness, when relevant.
    #[serde(skip)]
    pub missed: Option<usize>,
}

impl Decision {
    fn new(verdict: Verdict, witness: Option<Vec<Vec<usize>>>, note: impl Into<String>) -> Self {
        Self {
            verdict,
            witness,
            note: note.into(),
            missed: None,
        }
    }
}

fn check_profile(ks: &[usize], what: &str) -> Result<()> {
    if ks.is_empty() {
        return Err(Error::InvalidProfile(format!("{what} profile is empty")));
    }
    if ks.contains(&0) {
        return Err(Error::InvalidProfile(format!(
            "{what} profile contains a zero block size"
        )));
    }
    Ok(())
}

/// `suffix[t][v]`: `v` is a non-negative combination of `ks[t..]`.
fn suffix_table(ks: &[usize], m: usize) -> Vec<Vec<bool>> {
    let p = ks.len();
    let mut table = vec![vec![false; m + 1]; p + 1];
    table[p][0] = true;
    for t in (0..p).rev() {
        for v in 0..=m {
            table[t][v] = table[t + 1][v] || (v >= ks[t] && table[t][v - ks[t]]);
        }
    }
    table
}

/// Complete enumeration, pruned by representability of the remainder.
pub fn all_solutions(ks: &[usize], m: usize) -> SolutionSet {
    assert!(
        !ks.is_empty() && !ks.contains(&0),
        "block sizes must be positive"
    );
    let table = suffix_table(ks, m);
    let mut solutions = Vec::new();
    let mut x = vec![0; ks.len()];
    fn walk(
        ks: &[usize],
        table: &[Vec<bool>],
        t: usize,
        rest: usize,
        x: &mut Vec<usize>,
        out: &mut Vec<Vec<usize>>,
    ) {
        if t == ks.len() {
            if rest == 0 {
                out.push(x.clone());
            }
            return;
        }
        for c in 0..=rest / ks[t] {
            let r = rest - c * ks[t];
            if table[t + 1][r] {
                x[t] = c;
                walk(ks, table, t + 1, r, x, out);
            }
        }
        x[t] = 0;
    }
    walk(ks, &table, 0, m, &mut x, &mut solutions);
    SolutionSet {
        ks: ks.to_vec(),
        m,
        solutions,
    }
}

/// Lexicographically smallest solution, optionally with `x_avoid = 0`.
fn lex_smallest(ks: &[usize], m: usize, avoid: Option<usize>) -> Option<Vec<usize>> {
    let table = {
        let p = ks.len();
        let mut table = vec![vec![false; m + 1]; p + 1];
        table[p][0] = true;
        for t in (0..p).rev() {
            for v in 0..=m {
                let usable = avoid != Some(t);
                table[t][v] = table[t + 1][v] || (usable && v >= ks[t] && table[t][v - ks[t]]);
            }
        }
        table
    };
    if !table[0][m] {
        return None;
    }
    let mut x = vec![0; ks.len()];
    let mut rest = m;
    for t in 0..ks.len() {
        let max = if avoid == Some(t) { 0 } else { rest / ks[t] };
        let c = (0..=max)
            .find(|c| table[t + 1][rest - c * ks[t]])
            .expect("table guarantees a completion");
        x[t] = c;
        rest -= c * ks[t];
    }
    Some(x)
}

fn validate_family(ks: &[usize], ms: &[usize], family: &[Vec<usize>]) -> bool {
    family.len() == ms.len()
        && family.iter().zip(ms).all(|(x, &m)| {
            x.len() == ks.len() && x.iter().zip(ks).map(|(a, b)| a * b).sum::<usize>() == m
        })
}

/// Index set `{i : x_i > 0}` as a bitmask.
fn support(x: &[usize]) -> u64 {
    x.iter()
        .enumerate()
        .filter(|(_, &v)| v > 0)
        .fold(0, |acc, (i, _)| acc | 1 << i)
}

/// Every `m_j` is a non-negative combination of the `k_i`.
pub fn decide_shrink(ks: &[usize], ms: &[usize]) -> Result<Decision> {
    check_profile(ks, "source")?;
    check_profile(ms, "target")?;
    let mut family = Vec::with_capacity(ms.len());
    for (j, &m) in ms.iter().enumerate() {
        match lex_smallest(ks, m, None) {
            Some(x) => family.push(x),
            None => {
                return Ok(Decision::new(
                    Verdict::No,
                    None,
                    format!(
                        "target block {} (size {m}) is not a non-negative combination of {ks:?}",
                        j + 1
                    ),
                ))
            }
        }
    }
    Ok(Decision::new(
        Verdict::Yes,
        Some(family),
        "lexicographically smallest solution per target block",
    ))
}

/// A family of solutions, one per target, that uses every source index.
pub fn decide_preserve(ks: &[usize], ms: &[usize]) -> Result<Decision> {
    let shrink = decide_shrink(ks, ms)?;
    if shrink.verdict == Verdict::No {
        return Ok(Decision::new(
            Verdict::No,
            None,
            format!("no shrinking map: {}", shrink.note),
        ));
    }
    if ks.len() > 64 {
        return Err(Error::InvalidProfile(
            "at most 64 source blocks are supported".into(),
        ));
    }
    let full: u64 = if ks.len() == 64 {
        u64::MAX
    } else {
        (1 << ks.len()) - 1
    };
    let sets: Vec<SolutionSet> = ms.iter().map(|&m| all_solutions(ks, m)).collect();

    // Greedy: per target, the solution adding the most new indices.
    let mut covered = 0u64;
    let mut family = Vec::with_capacity(ms.len());
    for set in &sets {
        let best = set
            .solutions
            .iter()
            .max_by_key(|x| {
                (
                    ((support(x) & !covered).count_ones()),
                    std::cmp::Reverse(*x),
                )
            })
            .expect("shrink verdict guarantees a solution");
        covered |= support(best);
        family.push(best.clone());
    }
    if covered == full {
        debug_assert!(validate_family(ks, ms, &family));
        return Ok(Decision::new(
            Verdict::Yes,
            Some(family),
            "covering family found greedily",
        ));
    }

    // Exact search over reachable coverage masks.
    let mut layers: Vec<HashMap<u64, (u64, usize)>> = Vec::with_capacity(sets.len());
    let mut frontier: HashMap<u64, (u64, usize)> = HashMap::from([(0, (0, usize::MAX))]);
    for set in &sets {
        let mut by_support: Vec<(u64, usize)> = Vec::new();
        for (idx, x) in set.solutions.iter().enumerate() {
            let s = support(x);
            if !by_support.iter().any(|&(t, _)| t == s) {
                by_support.push((s, idx));
            }
        }
        let mut next: HashMap<u64, (u64, usize)> = HashMap::new();
        let mut prev: Vec<u64> = frontier.keys().copied().collect();
        prev.sort_unstable();
        for mask in prev {
            for &(s, idx) in &by_support {
                next.entry(mask | s).or_insert((mask, idx));
            }
        }
        layers.push(next.clone());
        frontier = next;
    }
    if !frontier.contains_key(&full) {
        return Ok(Decision::new(
            Verdict::No,
            None,
            "no family of solutions uses every source block",
        ));
    }
    let mut family = vec![Vec::new(); sets.len()];
    let mut mask = full;
    for j in (0..sets.len()).rev() {
        let (prev, idx) = layers[j][&mask];
        family[j] = sets[j].solutions[idx].clone();
        mask = prev;
    }
    if !validate_family(ks, ms, &family) || family.iter().fold(0, |a, x| a | support(x)) != full {
        return Err(Error::Internal("covering family failed validation".into()));
    }
    Ok(Decision::new(
        Verdict::Yes,
        Some(family),
        "covering family found by exhaustive search",
    ))
}

/// Whether every shrinking map is preserving. The condition checked is that
/// for each source index `i` some target equation forces `x_i > 0` in all of
/// its solutions. When it fails the answer is no, witnessed by a family that
/// misses `i`. When it holds the answer is yes for structural matrix
/// algebras and undetermined otherwise.
pub fn decide_all_shrink_preserving(
    ks: &[usize],
    ms: &[usize],
    a_is_sma: bool,
) -> Result<Decision> {
    let shrink = decide_shrink(ks, ms)?;
    if shrink.verdict == Verdict::No {
        return Ok(Decision::new(
            Verdict::Yes,
            None,
            format!("vacuously true: no shrinking map exists ({})", shrink.note),
        ));
    }
    let forced: Vec<bool> = (0..ks.len())
        .map(|i| {
            ms.iter()
                .any(|&m| all_solutions(ks, m).solutions.iter().all(|x| x[i] > 0))
        })
        .collect();
    if let Some(i) = forced.iter().position(|f| !f) {
        let family: Vec<Vec<usize>> = ms
            .iter()
            .map(|&m| lex_smallest(ks, m, Some(i)).expect("index is not forced in any equation"))
            .collect();
        debug_assert!(validate_family(ks, ms, &family));
        let mut d = Decision::new(
            Verdict::No,
            Some(family),
            format!(
                "the family never uses source block {} (size {}); its block map shrinks but does not preserve spectra",
                i + 1,
                ks[i]
            ),
        );
        d.missed = Some(i);
        return Ok(d);
    }
    let family = shrink.witness;
    if a_is_sma {
        Ok(Decision::new(
            Verdict::Yes,
            family,
            "every solution family covers every source block and the source is a structural matrix algebra",
        ))
    } else {
        Ok(Decision::new(
            Verdict::Undetermined,
            family,
            "every solution family covers every source block, but the converse is an open question \
             for sources that are not structural matrix algebras",
        ))
    }
}

/// Largest `m` that is not a non-negative combination of `ks`.
pub fn frobenius_number(ks: &[usize]) -> Result<usize> {
    if ks.len() < 2 {
        return Err(Error::NoFrobenius(
            "at least two block sizes are required".into(),
        ));
    }
    if ks.contains(&0) {
        return Err(Error::InvalidProfile("block sizes must be positive".into()));
    }
    if ks.contains(&1) {
        return Err(Error::NoFrobenius(
            "1 is among the block sizes, so every m is representable".into(),
        ));
    }
    if ks.iter().fold(0, |g, &k| num_integer::gcd(g, k)) != 1 {
        return Err(Error::NoFrobenius(format!("gcd{ks:?} is not 1")));
    }
    let kmin = *ks.iter().min().expect("nonempty");
    let mut repr = vec![true];
    let mut run = 0;
    let mut last_gap = 0;
    let mut m = 0;
    while run < kmin {
        m += 1;
        let r = ks.iter().any(|&k| m >= k && repr[m - k]);
        repr.push(r);
        if r {
            run += 1;
        } else {
            run = 0;
            last_gap = m;
        }
    }
    Ok(last_gap)
}

/// Whether some maximal ideal has codimension one, i.e. `1 ∈ ks`.
pub fn eigenvalue_selection_exists(ks: &[usize]) -> bool {
    ks.contains(&1)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn brute(ks: &[usize], m: usize) -> Vec<Vec<usize>> {
        fn rec(ks: &[usize], m: usize, prefix: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
            if prefix.len() == ks.len() {
                if prefix.iter().zip(ks).map(|(a, b)| a * b).sum::<usize>() == m {
                    out.push(prefix.clone());
                }
                return;
            }
            for c in 0..=m {
                prefix.push(c);
                rec(ks, m, prefix, out);
                prefix.pop();
            }
        }
        let mut out = Vec::new();
        rec(ks, m, &mut Vec::new(), &mut out);
        out
    }

    fn dp_member(ks: &[usize], m: usize) -> bool {
        let mut r = vec![false; m + 1];
        r[0] = true;
        for v in 1..=m {
            r[v] = ks.iter().any(|&k| v >= k && r[v - k]);
        }
        r[m]
    }

    /// Exhaustive: does any family (product of solution sets) cover all i?
    fn any_cover(ks: &[usize], ms: &[usize]) -> bool {
        let sets: Vec<Vec<Vec<usize>>> = ms.iter().map(|&m| brute(ks, m)).collect();
        fn rec(sets: &[Vec<Vec<usize>>], j: usize, cov: u64, full: u64) -> bool {
            if j == sets.len() {
                return cov == full;
            }
            sets[j]
                .iter()
                .any(|x| rec(sets, j + 1, cov | support(x), full))
        }
        rec(&sets, 0, 0, (1 << ks.len()) - 1)
    }

    #[test]
    fn all_solutions_examples() {
        assert_eq!(all_solutions(&[2], 6).solutions, vec![vec![3]]);
        assert_eq!(
            all_solutions(&[1, 2], 3).solutions,
            vec![vec![1, 1], vec![3, 0]]
        );
        assert!(!all_solutions(&[2, 3], 1).exists());
    }

    #[test]
    fn shrink_examples() {
        let d = decide_shrink(&[2], &[4, 6]).unwrap();
        assert_eq!(
            (d.verdict, d.witness),
            (Verdict::Yes, Some(vec![vec![2], vec![3]]))
        );
        assert_eq!(decide_shrink(&[1, 2], &[3]).unwrap().verdict, Verdict::Yes);
        assert_eq!(decide_shrink(&[2, 3], &[1]).unwrap().verdict, Verdict::No);
    }

    #[test]
    fn preserve_examples() {
        let d = decide_preserve(&[1, 2], &[3]).unwrap();
        assert_eq!(
            (d.verdict, d.witness),
            (Verdict::Yes, Some(vec![vec![1, 1]]))
        );
        let d = decide_preserve(&[2], &[4]).unwrap();
        assert_eq!((d.verdict, d.witness), (Verdict::Yes, Some(vec![vec![2]])));
        let s = decide_shrink(&[1, 3], &[2]).unwrap();
        assert_eq!(
            (s.verdict, s.witness),
            (Verdict::Yes, Some(vec![vec![2, 0]]))
        );
        assert_eq!(decide_preserve(&[1, 3], &[2]).unwrap().verdict, Verdict::No);
    }

    #[test]
    fn preserve_needs_exact_search_when_greedy_fails() {
        // Greedy picks (0,2) for m=6, after which m=3 only offers (0,1).
        let d = decide_preserve(&[2, 3], &[6, 3]).unwrap();
        assert_eq!(d.verdict, Verdict::Yes);
        assert_eq!(d.witness.unwrap(), vec![vec![3, 0], vec![0, 1]]);
        assert!(d.note.contains("exhaustive"));
    }

    #[test]
    fn all_preserving_examples() {
        let d = decide_all_shrink_preserving(&[1, 2], &[3], true).unwrap();
        assert_eq!(
            (d.verdict, d.witness.clone(), d.missed),
            (Verdict::No, Some(vec![vec![3, 0]]), Some(1))
        );
        let d = decide_all_shrink_preserving(&[2], &[2], true).unwrap();
        assert_eq!((d.verdict, d.witness), (Verdict::Yes, Some(vec![vec![1]])));
        let d = decide_all_shrink_preserving(&[2, 3], &[2, 3], false).unwrap();
        assert_eq!(d.verdict, Verdict::Undetermined);
        assert!(d.note.contains("open question"));
        let d = decide_all_shrink_preserving(&[2, 3], &[1], true).unwrap();
        assert_eq!((d.verdict, d.witness), (Verdict::Yes, None));
        assert!(d.note.contains("vacuous"));
    }

    #[test]
    fn frobenius_examples() {
        assert_eq!(frobenius_number(&[2, 3]).unwrap(), 1);
        assert_eq!(frobenius_number(&[3, 5]).unwrap(), 7);
        assert_eq!(frobenius_number(&[3, 4]).unwrap(), 5);
        assert!(matches!(
            frobenius_number(&[2, 4]),
            Err(Error::NoFrobenius(_))
        ));
        assert!(matches!(frobenius_number(&[5]), Err(Error::NoFrobenius(_))));
        assert!(matches!(
            frobenius_number(&[1, 4]),
            Err(Error::NoFrobenius(_))
        ));
    }

    #[test]
    fn eigsel_examples() {
        assert!(eigenvalue_selection_exists(&[1, 1]));
        assert!(!eigenvalue_selection_exists(&[2]));
        assert!(eigenvalue_selection_exists(&[2, 3, 1]));
    }

    #[test]
    fn decision_json_shape() {
        let d = decide_preserve(&[1, 2], &[3]).unwrap();
        let v = serde_json::to_value(&d).unwrap();
        assert_eq!(v["verdict"], "yes");
        assert_eq!(v["witness"], serde_json::json!([[1, 1]]));
        assert!(v.get("missed").is_none());
    }

    proptest! {
        #[test]
        fn enumeration_is_complete(ks in prop::collection::vec(1usize..=6, 1..=4), m in 0usize..=30) {
            prop_assert_eq!(all_solutions(&ks, m).solutions, brute(&ks, m));
        }

        #[test]
        fn shrink_matches_dp(ks in prop::collection::vec(1usize..=6, 1..=4), m in 1usize..=50) {
            let d = decide_shrink(&ks, &[m]).unwrap();
            prop_assert_eq!(d.verdict == Verdict::Yes, dp_member(&ks, m));
            if let Some(w) = d.witness {
                let all = all_solutions(&ks, m);
                prop_assert_eq!(Some(&w[0]), all.solutions.first());
            }
        }

        #[test]
        fn preserve_matches_exhaustive(ks in prop::collection::vec(1usize..=4, 1..=3),
                                       ms in prop::collection::vec(1usize..=9, 1..=3)) {
            let p = decide_preserve(&ks, &ms).unwrap();
            let s = decide_shrink(&ks, &ms).unwrap();
            if p.verdict == Verdict::Yes {
                prop_assert_eq!(s.verdict, Verdict::Yes);
                let w = p.witness.unwrap();
                prop_assert!(validate_family(&ks, &ms, &w));
                prop_assert_eq!(w.iter().fold(0, |a, x| a | support(x)), (1u64 << ks.len()) - 1);
            }
            prop_assert_eq!(p.verdict == Verdict::Yes, any_cover(&ks, &ms));
        }

        #[test]
        fn all_preserving_no_has_missing_index(ks in prop::collection::vec(1usize..=4, 1..=3),
                                               ms in prop::collection::vec(1usize..=9, 1..=3),
                                               sma in any::<bool>()) {
            let d = decide_all_shrink_preserving(&ks, &ms, sma).unwrap();
            if d.verdict == Verdict::No {
                let i = d.missed.unwrap();
                let w = d.witness.unwrap();
                prop_assert!(validate_family(&ks, &ms, &w));
                prop_assert!(w.iter().all(|x| x[i] == 0));
            }
        }

        #[test]
        fn frobenius_is_consistent(ks in prop::collection::vec(2usize..=12, 2..=3)) {
            prop_assume!(ks.iter().fold(0, |g, &k| num_integer::gcd(g, k)) == 1);
            let g = frobenius_number(&ks).unwrap();
            let kmin = *ks.iter().min().unwrap();
            prop_assert!(!dp_member(&ks, g));
            for m in g + 1..=g + kmin {
                prop_assert!(dp_member(&ks, m));
            }
        }

        #[test]
        fn eigsel_is_shrink_to_one(ks in prop::collection::vec(1usize..=5, 1..=4)) {
            let d = decide_shrink(&ks, &[1]).unwrap();
            prop_assert_eq!(eigenvalue_selection_exists(&ks), d.verdict == Verdict::Yes);
        }
    }
}
