//! Formula-definable set systems: one member set per parameter tuple.

use super::{CheckBudget, CheckError, Checker, PartitionedFormula, Valuation};
use crate::exec;
use crate::setsys::TupleSetSystem;
use crate::structures::Structure;
use std::collections::BTreeSet;

/// Decode a flat index into a tuple over `range`, most significant
/// variable first.
fn decode_tuple(mut idx: u64, width: usize, range: &[u32]) -> Vec<u32> {
    let base = range.len() as u64;
    let mut out = vec![0u32; width];
    for k in (0..width).rev() {
        out[k] = range[(idx % base) as usize];
        idx /= base;
    }
    out
}

/// The set system of formula-definable sets of `s`.
///
/// The universe is the domain of `s`, except that on structures carrying
/// the reserved `vert` predicate (incidence encodings and incidence
/// graphs) both object and parameter tuples range over vertex elements
/// only. Every parameter tuple contributes the member set of object
/// tuples satisfying the formula; duplicates collapse.
pub fn define_set_system(
    s: &Structure,
    pf: &PartitionedFormula,
    budget: CheckBudget,
) -> Result<TupleSetSystem, CheckError> {
    let range: Vec<u32> = match s.vertex_range() {
        Some(v) => v,
        None => (0..s.size()).collect(),
    };
    let universe: Vec<String> = range
        .iter()
        .map(|&e| s.element_name(e).to_string())
        .collect();
    let nx = pf.objects().len();
    let ny = pf.params().len();
    let base = range.len() as u64;
    let total_obj = base.checked_pow(nx as u32);
    let total_par = base.checked_pow(ny as u32);
    let (total_obj, total_par) = match (total_obj, total_par) {
        (Some(a), Some(b)) if (a as u128) * (b as u128) <= budget.max_steps as u128 => (a, b),
        _ => {
            return Err(CheckError::BudgetExceeded {
                estimate: u128::MAX,
                cap: budget.max_steps,
            })
        }
    };
    // Map structure element ids to universe-local indices.
    let local: std::collections::BTreeMap<u32, u32> = range
        .iter()
        .enumerate()
        .map(|(i, &e)| (e, i as u32))
        .collect();

    // Parameter tuples are processed in chunks; each chunk shares one
    // prepared checker (and its memo table).
    const CHUNK: u64 = 64;
    let n_chunks = if total_par == 0 {
        0
    } else {
        (total_par + CHUNK - 1) / CHUNK
    };
    let results: Vec<Result<Vec<BTreeSet<Vec<u32>>>, CheckError>> =
        exec::map_indexed(n_chunks as usize, |chunk| {
            let checker = Checker::new(s, budget);
            let prepared = checker.prepare(pf.formula())?;
            let lo = chunk as u64 * CHUNK;
            let hi = (lo + CHUNK).min(total_par);
            let mut members = Vec::with_capacity((hi - lo) as usize);
            for pidx in lo..hi {
                let ptuple = decode_tuple(pidx, ny, &range);
                let mut member = BTreeSet::new();
                for oidx in 0..total_obj {
                    let otuple = decode_tuple(oidx, nx, &range);
                    let mut v = Valuation::new();
                    for (name, &e) in pf.objects().iter().zip(&otuple) {
                        v = v.bind_elem(name, e);
                    }
                    for (name, &e) in pf.params().iter().zip(&ptuple) {
                        v = v.bind_elem(name, e);
                    }
                    if prepared.check(&v)? {
                        member.insert(otuple.iter().map(|e| local[e]).collect::<Vec<u32>>());
                    }
                }
                members.push(member);
            }
            Ok(members)
        });
    let mut family: Vec<BTreeSet<Vec<u32>>> = Vec::new();
    for r in results {
        family.extend(r?);
    }
    if ny == 0 && total_par == 1 && family.is_empty() {
        // 0 parameters on a non-empty range: single member.
        family.push(BTreeSet::new());
    }
    Ok(TupleSetSystem::new(universe, nx.max(1), family).expect("validated tuples"))
}
