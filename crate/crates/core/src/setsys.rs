//! Set systems and k-tuple set systems: restriction, shattering, VC
//! dimension, growth function, density fitting, and the classical bounds.
//!
//! For k > 1 the restriction/shattering notions are the k-tuple ones:
//! restrictions intersect members with `X^k` for element subsets `X`, and
//! only sets of that form are candidates for shattering. `k = 1` recovers
//! ordinary set systems.

use crate::exec;
use crate::util::binomial;
use rand::seq::index::sample as index_sample;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use std::collections::BTreeSet;
use std::fmt::Write as _;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum SetSysError {
    #[error("tuple arity must be at least 1")]
    ZeroArity,
    #[error("tuple {0:?} does not have arity {1}")]
    BadTuple(Vec<u32>, usize),
    #[error("tuple index {0} outside universe of size {1}")]
    IndexOutOfRange(u32, usize),
    #[error("restriction set contains index {0} outside universe of size {1}")]
    BadRestriction(u32, usize),
    #[error("enumeration of {0} cases exceeds budget {1}")]
    BudgetExceeded(u128, u64),
    #[error("n = {0} exceeds universe size {1}")]
    NTooLarge(u64, usize),
    #[error("density fit needs at least 3 usable points, got {0}")]
    TooFewPoints(usize),
    #[error("density fit needs at least two distinct n values")]
    DegeneratePoints,
}

/// A k-tuple set system: a universe plus a family of sets of k-tuples
/// over it, duplicates collapsed and canonically ordered.
#[derive(Clone, Debug)]
pub struct TupleSetSystem {
    universe: Vec<String>,
    k: usize,
    family: Vec<BTreeSet<Vec<u32>>>,
}

impl TupleSetSystem {
    pub fn new(
        universe: Vec<String>,
        k: usize,
        family: impl IntoIterator<Item = impl IntoIterator<Item = Vec<u32>>>,
    ) -> Result<Self, SetSysError> {
        if k == 0 {
            return Err(SetSysError::ZeroArity);
        }
        let mut canon: BTreeSet<BTreeSet<Vec<u32>>> = BTreeSet::new();
        for member in family {
            let mut set = BTreeSet::new();
            for t in member {
                if t.len() != k {
                    return Err(SetSysError::BadTuple(t, k));
                }
                if let Some(&bad) = t.iter().find(|&&e| e as usize >= universe.len()) {
                    return Err(SetSysError::IndexOutOfRange(bad, universe.len()));
                }
                set.insert(t);
            }
            canon.insert(set);
        }
        Ok(TupleSetSystem {
            universe,
            k,
            family: canon.into_iter().collect(),
        })
    }

    pub fn universe(&self) -> &[String] {
        &self.universe
    }

    pub fn arity(&self) -> usize {
        self.k
    }

    pub fn family(&self) -> &[BTreeSet<Vec<u32>>] {
        &self.family
    }

    pub fn len(&self) -> usize {
        self.family.len()
    }

    pub fn is_empty(&self) -> bool {
        self.family.is_empty()
    }

    /// Member sets as tuples of element names (canonical order), for
    /// name-based comparison across different universe orderings.
    pub fn named_view(&self) -> (BTreeSet<String>, BTreeSet<BTreeSet<Vec<String>>>) {
        let names: BTreeSet<String> = self.universe.iter().cloned().collect();
        let family = self
            .family
            .iter()
            .map(|s| {
                s.iter()
                    .map(|t| {
                        t.iter()
                            .map(|&e| self.universe[e as usize].clone())
                            .collect()
                    })
                    .collect()
            })
            .collect();
        (names, family)
    }
}

impl PartialEq for TupleSetSystem {
    fn eq(&self, other: &Self) -> bool {
        self.k == other.k && self.named_view() == other.named_view()
    }
}
impl Eq for TupleSetSystem {}

/// Restriction to `X`: universe becomes `X`, members become `S n X^k`.
pub fn restrict(f: &TupleSetSystem, x: &BTreeSet<u32>) -> Result<TupleSetSystem, SetSysError> {
    if let Some(&bad) = x.iter().find(|&&e| e as usize >= f.universe.len()) {
        return Err(SetSysError::BadRestriction(bad, f.universe.len()));
    }
    let keep: Vec<u32> = x.iter().copied().collect();
    let reindex: std::collections::BTreeMap<u32, u32> = keep
        .iter()
        .enumerate()
        .map(|(new, &old)| (old, new as u32))
        .collect();
    let universe: Vec<String> = keep
        .iter()
        .map(|&e| f.universe[e as usize].clone())
        .collect();
    let family = f.family.iter().map(|s| {
        s.iter()
            .filter(|t| t.iter().all(|e| x.contains(e)))
            .map(|t| t.iter().map(|e| reindex[e]).collect::<Vec<u32>>())
            .collect::<Vec<_>>()
    });
    TupleSetSystem::new(universe, f.k, family)
}

fn trace_count(f: &TupleSetSystem, x: &[u32]) -> usize {
    let xset: BTreeSet<u32> = x.iter().copied().collect();
    let mut traces: BTreeSet<Vec<&Vec<u32>>> = BTreeSet::new();
    for s in &f.family {
        let trace: Vec<&Vec<u32>> = s
            .iter()
            .filter(|t| t.iter().all(|e| xset.contains(e)))
            .collect();
        traces.insert(trace);
    }
    traces.len()
}

/// Is `X` shattered: is every subset of `X^k` realized as a trace?
pub fn is_shattered(f: &TupleSetSystem, x: &[u32], cap: u64) -> Result<bool, SetSysError> {
    let cells = (x.len() as u128).pow(f.k as u32);
    if cells > 63 {
        return Err(SetSysError::BudgetExceeded(u128::MAX, cap));
    }
    let want = 1u128 << cells;
    if want > cap as u128 {
        return Err(SetSysError::BudgetExceeded(want, cap));
    }
    Ok(trace_count(f, x) as u128 == want)
}

/// VC dimension by level-wise search with downward-closure pruning: a set
/// can only be shattered if all of its subsets are.
pub fn vc_dimension(f: &TupleSetSystem, cap: u64) -> Result<u32, SetSysError> {
    let u = f.universe.len() as u32;
    // The empty set is always shattered (its powerset is {empty trace}).
    let mut current: Vec<Vec<u32>> = vec![vec![]];
    let mut dim = 0u32;
    loop {
        let mut candidates: Vec<Vec<u32>> = Vec::new();
        let shattered: BTreeSet<&Vec<u32>> = current.iter().collect();
        for base in &current {
            let start = base.last().map(|&e| e + 1).unwrap_or(0);
            for e in start..u {
                let mut cand = base.clone();
                cand.push(e);
                // All size-d subsets of cand must already be shattered.
                let ok = (0..cand.len()).all(|skip| {
                    let sub: Vec<u32> = cand
                        .iter()
                        .enumerate()
                        .filter(|&(i, _)| i != skip)
                        .map(|(_, &v)| v)
                        .collect();
                    shattered.contains(&sub)
                });
                if ok {
                    candidates.push(cand);
                }
            }
        }
        if candidates.is_empty() {
            return Ok(dim);
        }
        let verdicts = exec::map_slice(&candidates, |cand| is_shattered(f, cand, cap));
        let mut next = Vec::new();
        for (cand, v) in candidates.into_iter().zip(verdicts) {
            if v? {
                next.push(cand);
            }
        }
        if next.is_empty() {
            return Ok(dim);
        }
        dim += 1;
        current = next;
    }
}

#[derive(Clone, Copy, Debug)]
pub enum GrowthMode {
    Exact,
    /// Max over `samples` uniform subsets; reported as a lower bound.
    Sampled { samples: u64, seed: u64 },
}

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub struct GrowthValue {
    pub value: u64,
    /// True for exact maxima; false marks sampled lower bounds, which are
    /// excluded from inequality checks.
    pub exact: bool,
}

fn combinations(u: usize, n: usize) -> Vec<Vec<u32>> {
    let mut out = Vec::new();
    if n > u {
        return out;
    }
    let mut idx: Vec<u32> = (0..n as u32).collect();
    loop {
        out.push(idx.clone());
        // Advance to the lexicographically next combination.
        let mut i = n;
        loop {
            if i == 0 {
                return out;
            }
            i -= 1;
            if idx[i] < (u - n + i) as u32 {
                idx[i] += 1;
                for j in i + 1..n {
                    idx[j] = idx[j - 1] + 1;
                }
                break;
            }
        }
    }
}

fn growth_core(
    f: &TupleSetSystem,
    n: u64,
    mode: GrowthMode,
    cap: u64,
    runner: impl Fn(&[Vec<u32>]) -> Vec<usize>,
) -> Result<GrowthValue, SetSysError> {
    let u = f.universe.len();
    if n > u as u64 {
        return Err(SetSysError::NTooLarge(n, u));
    }
    let subsets: Vec<Vec<u32>> = match mode {
        GrowthMode::Exact => {
            let count = binomial(u as u64, n);
            if count > cap as u128 {
                return Err(SetSysError::BudgetExceeded(count, cap));
            }
            combinations(u, n as usize)
        }
        GrowthMode::Sampled { samples, seed } => {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            (0..samples)
                .map(|_| {
                    let mut pick: Vec<u32> = index_sample(&mut rng, u, n as usize)
                        .into_iter()
                        .map(|i| i as u32)
                        .collect();
                    pick.sort_unstable();
                    pick
                })
                .collect()
        }
    };
    let counts = runner(&subsets);
    let value = counts.into_iter().max().unwrap_or(0) as u64;
    Ok(GrowthValue {
        value,
        exact: matches!(mode, GrowthMode::Exact),
    })
}

/// Growth function `pi(n)`: maximum restriction size over `n`-element
/// subsets of the universe.
pub fn growth_function(
    f: &TupleSetSystem,
    n: u64,
    mode: GrowthMode,
    cap: u64,
) -> Result<GrowthValue, SetSysError> {
    growth_core(f, n, mode, cap, |subsets| {
        exec::map_slice(subsets, |x| trace_count(f, x))
    })
}

/// Sequential twin of [`growth_function`], for benchmarking the parallel
/// backend against a pinned baseline.
pub fn growth_function_seq(
    f: &TupleSetSystem,
    n: u64,
    mode: GrowthMode,
    cap: u64,
) -> Result<GrowthValue, SetSysError> {
    growth_core(f, n, mode, cap, |subsets| {
        subsets.iter().map(|x| trace_count(f, x)).collect()
    })
}

/// The Sauer-Shelah bound `sum_{i<=d} C(n, i)`.
pub fn sauer_shelah_bound(n: u64, d: u64) -> u128 {
    (0..=d)
        .map(|i| binomial(n, i))
        .fold(0u128, |a, b| a.saturating_add(b))
}

/// Bound on the VC dimension of a system with growth at most `c * n^d`:
/// `4 d log2(c d)`.
pub fn density_to_dim_bound(c: f64, d: f64) -> f64 {
    assert!(c > 0.0 && d > 0.0);
    4.0 * d * (c * d).log2()
}

#[derive(Clone, Copy, Debug)]
pub struct DensityFit {
    /// Least-squares slope of `log pi` against `log n`.
    pub exponent: f64,
    /// Root-mean-square residual of the log-log fit; large values flag a
    /// poor (super-polynomial) fit.
    pub residual: f64,
    pub points_used: usize,
}

/// Fit a density exponent to `(n, pi(n))` points. Zero counts are
/// dropped; diagnostic only, never an acceptance gate by itself.
pub fn fit_density(points: &[(u64, u64)]) -> Result<DensityFit, SetSysError> {
    let usable: Vec<(f64, f64)> = points
        .iter()
        .filter(|&&(n, pi)| pi > 0 && n >= 1)
        .map(|&(n, pi)| ((n as f64).ln(), (pi as f64).ln()))
        .collect();
    if usable.len() < 3 {
        return Err(SetSysError::TooFewPoints(usable.len()));
    }
    let mean_x = usable.iter().map(|p| p.0).sum::<f64>() / usable.len() as f64;
    let mean_y = usable.iter().map(|p| p.1).sum::<f64>() / usable.len() as f64;
    let sxx: f64 = usable.iter().map(|p| (p.0 - mean_x).powi(2)).sum();
    if sxx < 1e-12 {
        return Err(SetSysError::DegeneratePoints);
    }
    let sxy: f64 = usable
        .iter()
        .map(|p| (p.0 - mean_x) * (p.1 - mean_y))
        .sum();
    let slope = sxy / sxx;
    let intercept = mean_y - slope * mean_x;
    let mse: f64 = usable
        .iter()
        .map(|p| (p.1 - (slope * p.0 + intercept)).powi(2))
        .sum::<f64>()
        / usable.len() as f64;
    Ok(DensityFit {
        exponent: slope,
        residual: mse.sqrt(),
        points_used: usable.len(),
    })
}

/// CSV rows `(n, pi, mode)` for growth measurements.
pub fn growth_csv(rows: &[(u64, GrowthValue)]) -> String {
    let mut out = String::from("n,pi,mode\n");
    for (n, g) in rows {
        let _ = writeln!(
            out,
            "{},{},{}",
            n,
            g.value,
            if g.exact { "exact" } else { "sampled-lower-bound" }
        );
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn names(n: usize) -> Vec<String> {
        (1..=n).map(|i| i.to_string()).collect()
    }

    fn singletons(n: usize) -> TupleSetSystem {
        TupleSetSystem::new(
            names(n),
            1,
            (0..n as u32).map(|i| vec![vec![i]]).collect::<Vec<_>>(),
        )
        .unwrap()
    }

    fn powerset_system(n: u32) -> TupleSetSystem {
        let mut family = Vec::new();
        for mask in 0u32..(1 << n) {
            family.push(
                (0..n)
                    .filter(|i| mask & (1 << i) != 0)
                    .map(|i| vec![i])
                    .collect::<Vec<_>>(),
            );
        }
        TupleSetSystem::new(names(n as usize), 1, family).unwrap()
    }

    /// Closed neighborhoods of the cycle C_n (or path P_n) as 1-systems.
    fn closed_neighborhoods(n: u32, cycle: bool) -> TupleSetSystem {
        let mut family = Vec::new();
        for v in 0..n {
            let mut member = vec![vec![v]];
            for u in 0..n {
                let adj = (u.abs_diff(v) == 1) || (cycle && u.abs_diff(v) == n - 1);
                if adj {
                    member.push(vec![u]);
                }
            }
            family.push(member);
        }
        TupleSetSystem::new(names(n as usize), 1, family).unwrap()
    }

    #[test]
    fn restrict_examples() {
        let s = singletons(3);
        let full: BTreeSet<u32> = (0..3).collect();
        assert_eq!(restrict(&s, &full).unwrap(), s);
        // X = {}: family collapses to {empty}.
        let empty = restrict(&s, &BTreeSet::new()).unwrap();
        assert_eq!(empty.len(), 1);
        // X = {1,2}: traces {1}, {2}, {} (three intersections).
        let x: BTreeSet<u32> = [0, 1].into();
        assert_eq!(restrict(&s, &x).unwrap().len(), 3);
        assert!(restrict(&s, &[9].into()).is_err());
    }

    #[test]
    fn restriction_monotonicity() {
        let s = closed_neighborhoods(6, true);
        let big: BTreeSet<u32> = [0, 1, 2, 3].into();
        let small: BTreeSet<u32> = [0, 1, 2].into();
        let rb = restrict(&s, &big).unwrap().len();
        let rs = restrict(&s, &small).unwrap().len();
        assert!(rs <= rb);
    }

    #[test]
    fn shattering_examples() {
        let s = singletons(4);
        assert!(is_shattered(&s, &[], 1 << 20).unwrap());
        assert!(is_shattered(&s, &[1], 1 << 20).unwrap());
        // {both} is never realized by singletons.
        assert!(!is_shattered(&s, &[1, 2], 1 << 20).unwrap());
    }

    #[test]
    fn shattering_downward_closure() {
        let s = closed_neighborhoods(5, true);
        for a in 0..5u32 {
            for b in (a + 1)..5 {
                if is_shattered(&s, &[a, b], 1 << 20).unwrap() {
                    assert!(is_shattered(&s, &[a], 1 << 20).unwrap());
                    assert!(is_shattered(&s, &[b], 1 << 20).unwrap());
                }
            }
        }
    }

    #[test]
    fn vc_dimension_examples() {
        assert_eq!(vc_dimension(&powerset_system(3), 1 << 20).unwrap(), 3);
        assert_eq!(vc_dimension(&singletons(5), 1 << 20).unwrap(), 1);
        // Closed neighborhoods of P4: golden value, checked here against
        // an independent exhaustive scan over all 2^4 subsets.
        let p4 = closed_neighborhoods(4, false);
        let mut best = 0;
        for mask in 0u32..16 {
            let x: Vec<u32> = (0..4).filter(|i| mask & (1 << i) != 0).collect();
            if is_shattered(&p4, &x, 1 << 20).unwrap() {
                best = best.max(x.len());
            }
        }
        assert_eq!(best, 1);
        assert_eq!(vc_dimension(&p4, 1 << 20).unwrap(), 1);
    }

    #[test]
    fn growth_examples() {
        let s = singletons(5);
        assert_eq!(
            growth_function(&s, 0, GrowthMode::Exact, 1 << 20)
                .unwrap()
                .value,
            1
        );
        // Universe 5, n=3: three singletons plus the empty trace.
        assert_eq!(
            growth_function(&s, 3, GrowthMode::Exact, 1 << 20)
                .unwrap()
                .value,
            4
        );
        assert!(growth_function(&s, 9, GrowthMode::Exact, 1 << 20).is_err());

        // Neighborhood system of the 5-cycle, n = 3, exact over all
        // C(5,3) = 10 subsets; independently recomputed here.
        let c5 = closed_neighborhoods(5, true);
        let got = growth_function(&c5, 3, GrowthMode::Exact, 1 << 20)
            .unwrap()
            .value;
        let mut best = 0;
        for x in combinations(5, 3) {
            best = best.max(trace_count(&c5, &x));
        }
        assert_eq!(got, best as u64);
        assert_eq!(got, 5);

        // Sampled mode is a lower bound on the exact value.
        let sampled = growth_function(
            &c5,
            3,
            GrowthMode::Sampled {
                samples: 4,
                seed: 11,
            },
            1 << 20,
        )
        .unwrap();
        assert!(!sampled.exact);
        assert!(sampled.value <= got);
    }

    #[test]
    fn growth_capped_by_powerset_and_sauer_shelah() {
        for sys in [
            singletons(5),
            closed_neighborhoods(5, true),
            powerset_system(3),
        ] {
            let d = vc_dimension(&sys, 1 << 20).unwrap();
            for n in 0..=sys.universe().len() as u64 {
                let pi = growth_function(&sys, n, GrowthMode::Exact, 1 << 20)
                    .unwrap()
                    .value;
                assert!(pi as u128 <= 1u128 << n);
                assert!(pi as u128 <= sauer_shelah_bound(n, d as u64));
                if pi as u128 == 1u128 << n {
                    assert!(n <= d as u64);
                }
            }
        }
    }

    #[test]
    fn sauer_shelah_values() {
        // d=0: bound 1 for all n.
        for n in 0..10 {
            assert_eq!(sauer_shelah_bound(n, 0), 1);
        }
        // n=4, d=2: 1+4+6 = 11.
        assert_eq!(sauer_shelah_bound(4, 2), 11);
    }

    #[test]
    fn density_fit_linear_and_exponential() {
        let linear: Vec<(u64, u64)> = (2..=9).map(|n| (n, n + 1)).collect();
        let fit = fit_density(&linear).unwrap();
        assert!(fit.exponent > 0.8 && fit.exponent < 1.2, "{}", fit.exponent);

        let expo: Vec<(u64, u64)> = (2..=6).map(|n| (n, 1u64 << n)).collect();
        let fit = fit_density(&expo).unwrap();
        assert!(fit.exponent > 2.0);
        assert!(fit.residual > 0.01, "exponential should fit poorly");

        assert!(fit_density(&[(2, 4), (2, 4), (2, 4)]).is_err());
        assert!(fit_density(&[(2, 0), (3, 0), (4, 1)]).is_err());
    }

    #[test]
    fn csv_rows() {
        let rows = vec![
            (
                2,
                GrowthValue {
                    value: 3,
                    exact: true,
                },
            ),
            (
                3,
                GrowthValue {
                    value: 5,
                    exact: false,
                },
            ),
        ];
        assert_eq!(
            growth_csv(&rows),
            "n,pi,mode\n2,3,exact\n3,5,sampled-lower-bound\n"
        );
    }

    #[test]
    fn tuple_arity_2_shattering() {
        // k=2 system realizing all subsets of X^2 for X = {0,1}.
        let mut family = Vec::new();
        let tuples: Vec<Vec<u32>> = vec![vec![0, 0], vec![0, 1], vec![1, 0], vec![1, 1]];
        for mask in 0u32..16 {
            family.push(
                tuples
                    .iter()
                    .enumerate()
                    .filter(|(i, _)| mask & (1 << i) != 0)
                    .map(|(_, t)| t.clone())
                    .collect::<Vec<_>>(),
            );
        }
        let sys = TupleSetSystem::new(names(3), 2, family).unwrap();
        assert!(is_shattered(&sys, &[0, 1], 1 << 20).unwrap());
        assert_eq!(vc_dimension(&sys, 1 << 20).unwrap(), 2);
    }
}
