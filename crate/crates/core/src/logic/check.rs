//! Brute-force CMSO model checking by exhaustive enumeration.
//!
//! First-order quantifiers range over the domain, monadic quantifiers
//! over all subsets. Two things keep this usable as an oracle:
//!
//! * quantifier nodes with small valuation spaces are memoized on
//!   (subformula, free-variable fingerprint), so shared macros (path
//!   closures, reachability) are tabulated once per structure;
//! * a budget guard estimates the enumeration cost up front and refuses
//!   instead of hanging, with a runtime step counter as backstop.
//!
//! Set quantifiers of the shape `existsS X (and (forall z (implies
//! (in z X) (P z))) body)` (and the `forallS`/`implies` dual) enumerate
//! only subsets of the unary predicate `P`; anything else contributes
//! trivially. This keeps vertex-relativized reachability affordable on
//! incidence encodings.

use super::{is_set_var, Formula, Valuation, Value};
use crate::structures::Structure;
use crate::util::ElemSet;
use std::cell::{Cell, RefCell};
use std::collections::HashMap;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum CheckError {
    #[error("unknown relation `{0}` in formula")]
    UnknownRelation(String),
    #[error("relation `{rel}` used with {got} arguments, arity is {want}")]
    ArityMismatch { rel: String, got: usize, want: usize },
    #[error("missing assignment for free variable `{0}`")]
    MissingAssignment(String),
    #[error("variable `{0}` used with inconsistent sort")]
    WrongSort(String),
    #[error("assignment for `{0}` is outside the structure domain")]
    OutsideDomain(String),
    #[error("formula has more than 64 distinct variables")]
    TooManyVariables,
    #[error("enumeration estimate {estimate} exceeds budget {cap}")]
    BudgetExceeded { estimate: u128, cap: u64 },
    #[error("runtime step limit {cap} exceeded")]
    StepLimit { cap: u64 },
}

/// Enumeration budget, in quantifier-iteration units.
#[derive(Clone, Copy, Debug)]
pub struct CheckBudget {
    pub max_steps: u64,
}

impl Default for CheckBudget {
    fn default() -> Self {
        // 2^30 valuations.
        CheckBudget {
            max_steps: 1 << 30,
        }
    }
}

impl CheckBudget {
    pub fn with_steps(max_steps: u64) -> Self {
        CheckBudget { max_steps }
    }
}

const MEMO_ENTRY_CAP: u128 = 1 << 18;

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
enum QuantKind {
    Exists,
    Forall,
    ExistsSet,
    ForallSet,
}

#[derive(Debug)]
enum COp {
    Rel { rel: usize, args: Vec<u8> },
    Eq(u8, u8),
    In(u8, u8),
    Mod(u8, u32, u32),
    Not(u32),
    And(u32, u32),
    Or(u32, u32),
    Implies(u32, u32),
    Quant {
        kind: QuantKind,
        slot: u8,
        body: u32,
        /// Subset guard: enumerate subsets of this unary relation and
        /// evaluate only the guarded body.
        guard: Option<GuardInfo>,
        memo: bool,
    },
}

#[derive(Debug, Clone, Copy)]
struct GuardInfo {
    rel: usize,
    inner: u32,
}

#[derive(Debug)]
struct CNode {
    op: COp,
    /// Free slots of this subformula, as a bitmask.
    free: u64,
}

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
enum SlotKind {
    Fo,
    Set,
}

enum EnvVal {
    Unset,
    Elem(u32),
    Set(ElemSet),
}

/// A checker factory bound to one structure.
pub struct Checker<'s> {
    s: &'s Structure,
    budget: CheckBudget,
    guards_enabled: bool,
}

impl<'s> Checker<'s> {
    pub fn new(s: &'s Structure, budget: CheckBudget) -> Self {
        Checker {
            s,
            budget,
            guards_enabled: true,
        }
    }

    /// Disable the subset-guard enumeration optimization (differential
    /// testing only).
    pub fn without_guard_optimization(mut self) -> Self {
        self.guards_enabled = false;
        self
    }

    pub fn structure(&self) -> &'s Structure {
        self.s
    }

    /// Compile a formula against this structure and verify the budget.
    /// The returned [`Prepared`] carries a memo table shared across all
    /// of its `check` calls.
    pub fn prepare(&self, f: &Formula) -> Result<Prepared<'s>, CheckError> {
        let mut b = Builder {
            s: self.s,
            nodes: Vec::new(),
            slots: Vec::new(),
            guards_enabled: self.guards_enabled,
        };
        let root = b.compile(f)?;
        let mut p = Prepared {
            s: self.s,
            nodes: b.nodes,
            slots: b.slots,
            root,
            budget: self.budget,
            memo: RefCell::new(HashMap::new()),
            steps: Cell::new(0),
        };
        p.decide_memo();
        let est = p.estimate();
        if est > self.budget.max_steps as u128 {
            return Err(CheckError::BudgetExceeded {
                estimate: est,
                cap: self.budget.max_steps,
            });
        }
        Ok(p)
    }
}

/// One-shot convenience wrapper: prepare and evaluate.
pub fn check(
    s: &Structure,
    f: &Formula,
    v: &Valuation,
    budget: CheckBudget,
) -> Result<bool, CheckError> {
    Checker::new(s, budget).prepare(f)?.check(v)
}

struct Builder<'s> {
    s: &'s Structure,
    nodes: Vec<CNode>,
    slots: Vec<(String, SlotKind)>,
    guards_enabled: bool,
}

impl<'s> Builder<'s> {
    fn slot(&mut self, name: &str) -> Result<u8, CheckError> {
        let kind = if is_set_var(name) {
            SlotKind::Set
        } else {
            SlotKind::Fo
        };
        if let Some(i) = self.slots.iter().position(|(n, _)| n == name) {
            if self.slots[i].1 != kind {
                return Err(CheckError::WrongSort(name.to_string()));
            }
            return Ok(i as u8);
        }
        if self.slots.len() >= 64 {
            return Err(CheckError::TooManyVariables);
        }
        self.slots.push((name.to_string(), kind));
        Ok((self.slots.len() - 1) as u8)
    }

    fn push(&mut self, op: COp, free: u64) -> u32 {
        self.nodes.push(CNode { op, free });
        (self.nodes.len() - 1) as u32
    }

    fn compile(&mut self, f: &Formula) -> Result<u32, CheckError> {
        match f {
            Formula::Rel(name, args) => {
                let rel = self
                    .s
                    .signature()
                    .index_of(name)
                    .ok_or_else(|| CheckError::UnknownRelation(name.clone()))?;
                let want = self.s.signature().rels()[rel].arity;
                if want != args.len() {
                    return Err(CheckError::ArityMismatch {
                        rel: name.clone(),
                        got: args.len(),
                        want,
                    });
                }
                let mut free = 0u64;
                let mut arg_slots = Vec::with_capacity(args.len());
                for a in args {
                    let sl = self.slot(a)?;
                    free |= 1 << sl;
                    arg_slots.push(sl);
                }
                Ok(self.push(
                    COp::Rel {
                        rel,
                        args: arg_slots,
                    },
                    free,
                ))
            }
            Formula::Eq(a, b) => {
                let sa = self.slot(a)?;
                let sb = self.slot(b)?;
                Ok(self.push(COp::Eq(sa, sb), (1 << sa) | (1 << sb)))
            }
            Formula::In(x, set) => {
                let sx = self.slot(x)?;
                let ss = self.slot(set)?;
                Ok(self.push(COp::In(sx, ss), (1 << sx) | (1 << ss)))
            }
            Formula::Mod(set, a, p) => {
                let ss = self.slot(set)?;
                Ok(self.push(COp::Mod(ss, *a, *p), 1 << ss))
            }
            Formula::Not(g) => {
                let c = self.compile(g)?;
                let free = self.nodes[c as usize].free;
                Ok(self.push(COp::Not(c), free))
            }
            Formula::And(a, b) | Formula::Or(a, b) | Formula::Implies(a, b) => {
                let ca = self.compile(a)?;
                let cb = self.compile(b)?;
                let free = self.nodes[ca as usize].free | self.nodes[cb as usize].free;
                let op = match f {
                    Formula::And(..) => COp::And(ca, cb),
                    Formula::Or(..) => COp::Or(ca, cb),
                    _ => COp::Implies(ca, cb),
                };
                Ok(self.push(op, free))
            }
            Formula::Exists(v, body) | Formula::Forall(v, body) => {
                let slot = self.slot(v)?;
                let cb = self.compile(body)?;
                let free = self.nodes[cb as usize].free & !(1 << slot);
                let kind = if matches!(f, Formula::Exists(..)) {
                    QuantKind::Exists
                } else {
                    QuantKind::Forall
                };
                Ok(self.push(
                    COp::Quant {
                        kind,
                        slot,
                        body: cb,
                        guard: None,
                        memo: false,
                    },
                    free,
                ))
            }
            Formula::ExistsSet(v, body) | Formula::ForallSet(v, body) => {
                let slot = self.slot(v)?;
                let is_exists = matches!(f, Formula::ExistsSet(..));
                let guard_split = if self.guards_enabled {
                    split_subset_guard(v, body, is_exists)
                } else {
                    None
                };
                let (guard, cb) = match guard_split {
                    Some((pred, inner)) => {
                        let rel = self
                            .s
                            .signature()
                            .index_of(pred)
                            .ok_or_else(|| CheckError::UnknownRelation(pred.to_string()))?;
                        if self.s.signature().rels()[rel].arity != 1 {
                            // Not a unary predicate: fall back to the
                            // unguarded path.
                            let cb = self.compile(body)?;
                            (None, cb)
                        } else {
                            let ci = self.compile(inner)?;
                            (Some(GuardInfo { rel, inner: ci }), ci)
                        }
                    }
                    None => (None, self.compile(body)?),
                };
                let free = self.nodes[cb as usize].free & !(1 << slot);
                let kind = if is_exists {
                    QuantKind::ExistsSet
                } else {
                    QuantKind::ForallSet
                };
                Ok(self.push(
                    COp::Quant {
                        kind,
                        slot,
                        body: cb,
                        guard,
                        memo: false,
                    },
                    free,
                ))
            }
        }
    }
}

/// Recognize `and (forall z (implies (in z X) (P z))) inner` under an
/// `existsS X`, or the `implies`-dual under `forallS X`. Returns the
/// predicate name and the guarded body.
fn split_subset_guard<'f>(
    set_var: &str,
    body: &'f Formula,
    is_exists: bool,
) -> Option<(&'f str, &'f Formula)> {
    let (g, inner) = match (is_exists, body) {
        (true, Formula::And(g, inner)) => (g, inner),
        (false, Formula::Implies(g, inner)) => (g, inner),
        _ => return None,
    };
    if let Formula::Forall(z, imp) = g.as_ref() {
        if let Formula::Implies(lhs, rhs) = imp.as_ref() {
            if let (Formula::In(x, set), Formula::Rel(pred, args)) = (lhs.as_ref(), rhs.as_ref()) {
                if x == z && set == set_var && args.len() == 1 && args[0] == *z {
                    return Some((pred.as_str(), inner));
                }
            }
        }
    }
    None
}

/// A compiled formula bound to a structure, with a persistent memo table.
pub struct Prepared<'s> {
    s: &'s Structure,
    nodes: Vec<CNode>,
    slots: Vec<(String, SlotKind)>,
    root: u32,
    budget: CheckBudget,
    memo: RefCell<HashMap<Vec<u64>, bool>>,
    steps: Cell<u64>,
}

impl<'s> Prepared<'s> {
    fn dom(&self) -> u32 {
        self.s.size()
    }

    /// Valuation-space bound for a node's free slots, all ranges counted.
    fn entries_bound(&self, node: u32) -> u128 {
        let mut acc: u128 = 1;
        let free = self.nodes[node as usize].free;
        for (i, (_, kind)) in self.slots.iter().enumerate() {
            if free & (1 << i) != 0 {
                let factor: u128 = match kind {
                    SlotKind::Fo => self.dom() as u128,
                    SlotKind::Set => 1u128
                        .checked_shl(self.dom())
                        .unwrap_or(u128::MAX),
                };
                acc = acc.saturating_mul(factor.max(1));
            }
        }
        acc
    }

    fn decide_memo(&mut self) {
        let bounds: Vec<u128> = (0..self.nodes.len())
            .map(|i| self.entries_bound(i as u32))
            .collect();
        for (i, n) in self.nodes.iter_mut().enumerate() {
            if let COp::Quant { memo, .. } = &mut n.op {
                *memo = bounds[i] <= MEMO_ENTRY_CAP;
            }
        }
    }

    fn branch_count(&self, node: u32) -> u128 {
        match &self.nodes[node as usize].op {
            COp::Quant { kind, guard, .. } => match kind {
                QuantKind::Exists | QuantKind::Forall => self.dom().max(1) as u128,
                QuantKind::ExistsSet | QuantKind::ForallSet => {
                    let width = match guard {
                        Some(g) => self.s.tuples(g.rel).len() as u32,
                        None => self.dom(),
                    };
                    1u128.checked_shl(width).unwrap_or(u128::MAX)
                }
            },
            _ => 1,
        }
    }

    /// Cost estimate in quantifier iterations, assuming memoized nodes
    /// are evaluated at most once per distinct key. Free variables of the
    /// whole formula are pinned by the valuation and count once.
    fn estimate(&self) -> u128 {
        let root_free = self.nodes[self.root as usize].free;
        let mut charged: u128 = 0;
        let mut stack = vec![(self.root, 1u128)];
        while let Some((id, visits)) = stack.pop() {
            let node = &self.nodes[id as usize];
            match &node.op {
                COp::Quant { body, memo, .. } => {
                    let eff = if *memo {
                        let mut entries: u128 = 1;
                        for (i, (_, kind)) in self.slots.iter().enumerate() {
                            let b = 1u64 << i;
                            if node.free & b != 0 && root_free & b == 0 {
                                let factor: u128 = match kind {
                                    SlotKind::Fo => self.dom() as u128,
                                    SlotKind::Set => {
                                        1u128.checked_shl(self.dom()).unwrap_or(u128::MAX)
                                    }
                                };
                                entries = entries.saturating_mul(factor.max(1));
                            }
                        }
                        visits.min(entries)
                    } else {
                        visits
                    };
                    let down = eff.saturating_mul(self.branch_count(id));
                    charged = charged.saturating_add(down);
                    stack.push((*body, down));
                }
                COp::Not(a) => stack.push((*a, visits)),
                COp::And(a, b) | COp::Or(a, b) | COp::Implies(a, b) => {
                    stack.push((*a, visits));
                    stack.push((*b, visits));
                }
                _ => {}
            }
        }
        charged
    }

    /// Evaluate under a valuation covering the free variables.
    pub fn check(&self, v: &Valuation) -> Result<bool, CheckError> {
        let mut env: Vec<EnvVal> = self.slots.iter().map(|_| EnvVal::Unset).collect();
        let root_free = self.nodes[self.root as usize].free;
        for (i, (name, kind)) in self.slots.iter().enumerate() {
            if root_free & (1 << i) == 0 {
                continue;
            }
            match (kind, v.get(name)) {
                (SlotKind::Fo, Some(Value::Elem(e))) => {
                    if *e >= self.dom() {
                        return Err(CheckError::OutsideDomain(name.clone()));
                    }
                    env[i] = EnvVal::Elem(*e);
                }
                (SlotKind::Set, Some(Value::Set(s))) => {
                    if s.domain_len() != self.dom() {
                        return Err(CheckError::OutsideDomain(name.clone()));
                    }
                    env[i] = EnvVal::Set(s.clone());
                }
                (_, Some(_)) => return Err(CheckError::WrongSort(name.clone())),
                (_, None) => return Err(CheckError::MissingAssignment(name.clone())),
            }
        }
        self.steps.set(0);
        self.eval(self.root, &mut env)
    }

    fn bump(&self) -> Result<(), CheckError> {
        let s = self.steps.get() + 1;
        self.steps.set(s);
        if s > self.budget.max_steps {
            Err(CheckError::StepLimit {
                cap: self.budget.max_steps,
            })
        } else {
            Ok(())
        }
    }

    fn memo_key(&self, id: u32, env: &[EnvVal]) -> Vec<u64> {
        let node = &self.nodes[id as usize];
        let mut key = vec![id as u64];
        for i in 0..self.slots.len() {
            if node.free & (1 << i) != 0 {
                match &env[i] {
                    EnvVal::Elem(e) => key.push(*e as u64),
                    EnvVal::Set(s) => key.extend_from_slice(s.words()),
                    EnvVal::Unset => unreachable!("free slot unset during eval"),
                }
            }
        }
        key
    }

    fn eval(&self, id: u32, env: &mut Vec<EnvVal>) -> Result<bool, CheckError> {
        let node = &self.nodes[id as usize];
        match &node.op {
            COp::Rel { rel, args } => {
                let mut tuple = [0u32; 8];
                debug_assert!(args.len() <= 8);
                for (k, &sl) in args.iter().enumerate() {
                    tuple[k] = match env[sl as usize] {
                        EnvVal::Elem(e) => e,
                        _ => unreachable!(),
                    };
                }
                Ok(self.s.holds(*rel, &tuple[..args.len()]))
            }
            COp::Eq(a, b) => {
                let (EnvVal::Elem(ea), EnvVal::Elem(eb)) = (&env[*a as usize], &env[*b as usize])
                else {
                    unreachable!()
                };
                Ok(ea == eb)
            }
            COp::In(x, set) => {
                let EnvVal::Elem(e) = env[*x as usize] else {
                    unreachable!()
                };
                let EnvVal::Set(s) = &env[*set as usize] else {
                    unreachable!()
                };
                Ok(s.contains(e))
            }
            COp::Mod(set, a, p) => {
                let EnvVal::Set(s) = &env[*set as usize] else {
                    unreachable!()
                };
                Ok(s.count() % p == *a)
            }
            COp::Not(g) => Ok(!self.eval(*g, env)?),
            COp::And(x, y) => Ok(self.eval(*x, env)? && self.eval(*y, env)?),
            COp::Or(x, y) => Ok(self.eval(*x, env)? || self.eval(*y, env)?),
            COp::Implies(x, y) => Ok(!self.eval(*x, env)? || self.eval(*y, env)?),
            COp::Quant {
                kind,
                slot,
                body,
                guard,
                memo,
            } => {
                let memo_key = if *memo {
                    let key = self.memo_key(id, env);
                    if let Some(&hit) = self.memo.borrow().get(&key) {
                        return Ok(hit);
                    }
                    Some(key)
                } else {
                    None
                };
                let result = self.eval_quant(*kind, *slot, *body, *guard, env)?;
                if let Some(key) = memo_key {
                    self.memo.borrow_mut().insert(key, result);
                }
                Ok(result)
            }
        }
    }

    fn eval_quant(
        &self,
        kind: QuantKind,
        slot: u8,
        body: u32,
        guard: Option<GuardInfo>,
        env: &mut Vec<EnvVal>,
    ) -> Result<bool, CheckError> {
        let slot = slot as usize;
        let witness_wanted = matches!(kind, QuantKind::Exists | QuantKind::ExistsSet);
        let mut result = !witness_wanted;
        match kind {
            QuantKind::Exists | QuantKind::Forall => {
                for e in 0..self.dom() {
                    self.bump()?;
                    env[slot] = EnvVal::Elem(e);
                    let r = self.eval(body, env)?;
                    if r == witness_wanted {
                        result = r;
                        break;
                    }
                }
            }
            QuantKind::ExistsSet | QuantKind::ForallSet => match guard {
                None => {
                    let mut set = ElemSet::empty(self.dom());
                    loop {
                        self.bump()?;
                        env[slot] = EnvVal::Set(set);
                        let r = self.eval(body, env)?;
                        let EnvVal::Set(s) = std::mem::replace(&mut env[slot], EnvVal::Unset)
                        else {
                            unreachable!()
                        };
                        set = s;
                        if r == witness_wanted {
                            result = r;
                            break;
                        }
                        if !set.increment() {
                            break;
                        }
                    }
                }
                Some(g) => {
                    // Subsets of the guard predicate only, in Gray-code
                    // order so each step toggles a single element.
                    let elems: Vec<u32> = self.s.tuples(g.rel).iter().map(|t| t[0]).collect();
                    if elems.len() >= 64 {
                        return Err(CheckError::StepLimit {
                            cap: self.budget.max_steps,
                        });
                    }
                    let mut set = ElemSet::empty(self.dom());
                    let total: u64 = 1u64 << elems.len();
                    for k in 0..total {
                        if k > 0 {
                            let flip = elems[k.trailing_zeros() as usize];
                            if set.contains(flip) {
                                set.remove(flip);
                            } else {
                                set.insert(flip);
                            }
                        }
                        self.bump()?;
                        env[slot] = EnvVal::Set(set);
                        let r = self.eval(g.inner, env)?;
                        let EnvVal::Set(s) = std::mem::replace(&mut env[slot], EnvVal::Unset)
                        else {
                            unreachable!()
                        };
                        set = s;
                        if r == witness_wanted {
                            result = r;
                            break;
                        }
                    }
                }
            },
        }
        env[slot] = EnvVal::Unset;
        Ok(result)
    }
}

#[cfg(test)]
mod tests {
    use super::super::*;
    use super::*;
    use crate::structures::{Graph, Signature, Structure, StructureKind};

    fn edgeless(n: usize) -> Structure {
        let sig = Signature::from_arities(&[("E", 2)]).unwrap();
        Structure::new(
            sig,
            StructureKind::GraphAdj,
            (1..=n).map(|i| i.to_string()).collect(),
            vec![],
        )
        .unwrap()
    }

    fn path(n: usize) -> Structure {
        let vertices: Vec<String> = (1..=n).map(|i| i.to_string()).collect();
        let edges = (1..n)
            .map(|i| (i.to_string(), (i + 1).to_string()))
            .collect();
        Graph::adjacency(vertices, edges).unwrap().into_structure()
    }

    #[test]
    fn exhaustive_parity_tautology() {
        // forall X (|X| = 0 mod 2 or |X| = 1 mod 2) holds everywhere.
        let f = forall_set("X", or(modular("X", 0, 2), modular("X", 1, 2)));
        for s in [edgeless(1), edgeless(3), path(4)] {
            assert!(check(&s, &f, &Valuation::new(), CheckBudget::default()).unwrap());
        }
    }

    #[test]
    fn edge_existence() {
        let f = exists("x", exists("y", rel("E", &["x", "y"])));
        assert!(check(&path(2), &f, &Valuation::new(), CheckBudget::default()).unwrap());
        assert!(!check(&edgeless(2), &f, &Valuation::new(), CheckBudget::default()).unwrap());
    }

    #[test]
    fn dominating_singleton_on_p3() {
        // exists X: |X| <= 1 and X dominates; true on P3 by the middle
        // vertex, checked against all 8 subsets by the enumerator.
        let small = forall(
            "u",
            forall(
                "v",
                implies(and(member("u", "X"), member("v", "X")), eq("u", "v")),
            ),
        );
        let dom = forall(
            "w",
            or(
                member("w", "X"),
                exists("z", and(member("z", "X"), rel("E", &["z", "w"]))),
            ),
        );
        let f = exists_set("X", and(small, dom));
        assert!(check(&path(3), &f, &Valuation::new(), CheckBudget::default()).unwrap());
        // Two disjoint edges need two dominators.
        let two_edges = Graph::adjacency(
            vec!["1".into(), "2".into(), "3".into(), "4".into()],
            vec![("1".into(), "2".into()), ("3".into(), "4".into())],
        )
        .unwrap()
        .into_structure();
        assert!(!check(&two_edges, &f, &Valuation::new(), CheckBudget::default()).unwrap());
    }

    #[test]
    fn free_variables_and_errors() {
        let s = path(3);
        let f = rel("E", &["x", "y"]);
        let v = Valuation::new().bind_elem("x", 0).bind_elem("y", 1);
        assert!(check(&s, &f, &v, CheckBudget::default()).unwrap());
        let v2 = Valuation::new().bind_elem("x", 0).bind_elem("y", 2);
        assert!(!check(&s, &f, &v2, CheckBudget::default()).unwrap());

        let missing = Valuation::new().bind_elem("x", 0);
        assert!(matches!(
            check(&s, &f, &missing, CheckBudget::default()),
            Err(CheckError::MissingAssignment(_))
        ));
        assert!(matches!(
            check(&s, &rel("F", &["x"]), &Valuation::new(), CheckBudget::default()),
            Err(CheckError::UnknownRelation(_))
        ));
        assert!(matches!(
            check(&s, &rel("E", &["x"]), &Valuation::new(), CheckBudget::default()),
            Err(CheckError::ArityMismatch { .. })
        ));
    }

    #[test]
    fn isomorphism_invariance_under_renaming() {
        // check is invariant under domain-element renaming.
        let s = path(4);
        let perm = [2u32, 0, 3, 1];
        let renamed = {
            let vertices: Vec<String> = (0..4).map(|i| format!("w{}", perm[i])).collect();
            let mut edges = Vec::new();
            for t in s.tuples_by_name("E").unwrap() {
                if t[0] < t[1] {
                    edges.push((
                        format!("w{}", perm[t[0] as usize]),
                        format!("w{}", perm[t[1] as usize]),
                    ));
                }
            }
            Graph::adjacency(vertices, edges).unwrap().into_structure()
        };
        let formulas = [
            exists("x", forall("y", or(eq("x", "y"), rel("E", &["x", "y"])))),
            exists_set(
                "X",
                and(
                    modular("X", 0, 2),
                    forall("u", implies(member("u", "X"), exists("v", rel("E", &["u", "v"])))),
                ),
            ),
        ];
        for f in &formulas {
            let a = check(&s, f, &Valuation::new(), CheckBudget::default()).unwrap();
            let b = check(&renamed, f, &Valuation::new(), CheckBudget::default()).unwrap();
            assert_eq!(a, b);
        }
    }

    #[test]
    fn budget_refusal() {
        let s = edgeless(30);
        // 2^30 subsets times 2^30 subsets blows the default budget.
        let f = exists_set("X", exists_set("Y", modular("X", 0, 2)));
        assert!(matches!(
            check(&s, &f, &Valuation::new(), CheckBudget::default()),
            Err(CheckError::BudgetExceeded { .. })
        ));
    }

    #[test]
    fn guard_optimization_matches_plain_enumeration() {
        let s = path(5);
        // Guarded: X ranges over subsets of the unary predicate... here we
        // use `E`-incident check with a vert-like predicate via labels.
        let sig = Signature::new(vec![
            crate::structures::RelDecl {
                name: "E".into(),
                arity: 2,
                is_label: false,
            },
            crate::structures::RelDecl {
                name: "P".into(),
                arity: 1,
                is_label: false,
            },
        ])
        .unwrap();
        let s2 = Structure::new(
            sig,
            StructureKind::Generic,
            s.elements().to_vec(),
            vec![
                (
                    "E".into(),
                    s.tuples_by_name("E")
                        .unwrap()
                        .iter()
                        .map(|t| {
                            t.iter()
                                .map(|&e| s.element_name(e).to_string())
                                .collect::<Vec<_>>()
                        })
                        .collect(),
                ),
                (
                    "P".into(),
                    vec![vec!["1".into()], vec!["3".into()], vec!["5".into()]],
                ),
            ],
        )
        .unwrap();
        let guard = forall("z", implies(member("z", "X"), rel("P", &["z"])));
        let body = and(
            modular("X", 1, 2),
            forall("u", implies(member("u", "X"), exists("v", rel("E", &["u", "v"])))),
        );
        for f in [
            exists_set("X", and(guard.clone(), body.clone())),
            forall_set("X", implies(guard.clone(), body.clone())),
        ] {
            let fast = Checker::new(&s2, CheckBudget::default())
                .prepare(&f)
                .unwrap()
                .check(&Valuation::new())
                .unwrap();
            let slow = Checker::new(&s2, CheckBudget::default())
                .without_guard_optimization()
                .prepare(&f)
                .unwrap()
                .check(&Valuation::new())
                .unwrap();
            assert_eq!(fast, slow);
        }
    }
}
