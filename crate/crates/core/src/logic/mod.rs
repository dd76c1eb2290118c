//! CMSO abstract syntax, text parser, and brute-force semantics over
//! finite structures.
//!
//! The checker in this module is the correctness oracle for the whole
//! crate: everything the automaton pipeline computes is cross-checked
//! against exhaustive enumeration here at small scales.
//!
//! Variable naming convention: first-order variables start with a
//! lowercase letter, monadic (set) variables with an uppercase letter.

mod check;
mod parser;
mod setdef;

pub use check::{check, CheckBudget, CheckError, Checker, Prepared};
pub use parser::{parse_formula, print_formula, ParseError};
pub use setdef::define_set_system;

use crate::util::ElemSet;
use std::collections::{BTreeMap, BTreeSet};
use thiserror::Error;

#[derive(Debug, Error)]
pub enum LogicError {
    #[error("variable `{0}` must be first-order (lowercase initial)")]
    NotFirstOrder(String),
    #[error("variable `{0}` must be monadic (uppercase initial)")]
    NotMonadic(String),
    #[error("modular atom requires p >= 2 and 0 <= a < p, got a={a}, p={p}")]
    BadModulus { a: u32, p: u32 },
    #[error("modular atom |{x}| = {a} mod {p} not allowed in dialect {dialect:?}")]
    DialectViolation {
        x: String,
        a: u32,
        p: u32,
        dialect: Dialect,
    },
    #[error("variable `{0}` is bound twice along one scope chain")]
    Shadowed(String),
    #[error("variable `{0}` occurs free but is not declared")]
    Unbound(String),
    #[error("object and parameter variables must be disjoint, both saw `{0}`")]
    OverlappingPartition(String),
    #[error("partitioned formula needs at least one object variable")]
    NoObjects(String),
    #[error("partition must cover exactly the free first-order variables; mismatch at `{0}`")]
    PartitionMismatch(String),
    #[error("partitioned formula must not have free monadic variables, found `{0}`")]
    FreeMonadic(String),
}

/// Logic dialect gate for modular atoms.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Debug)]
pub enum Dialect {
    /// No modular atoms.
    Mso,
    /// Modular atoms with p = 2 only.
    C2Mso,
    /// Arbitrary modular atoms.
    Cmso,
}

impl Dialect {
    pub fn admits(self, p: u32) -> bool {
        match self {
            Dialect::Mso => false,
            Dialect::C2Mso => p == 2,
            Dialect::Cmso => true,
        }
    }
}

/// CMSO syntax tree. First-order variables are lowercase, monadic
/// variables uppercase; `Mod(X, a, p)` is the cardinality predicate
/// `|X| = a (mod p)`.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub enum Formula {
    Rel(String, Vec<String>),
    Eq(String, String),
    In(String, String),
    Mod(String, u32, u32),
    Not(Box<Formula>),
    And(Box<Formula>, Box<Formula>),
    Or(Box<Formula>, Box<Formula>),
    Implies(Box<Formula>, Box<Formula>),
    Exists(String, Box<Formula>),
    Forall(String, Box<Formula>),
    ExistsSet(String, Box<Formula>),
    ForallSet(String, Box<Formula>),
}

pub fn is_set_var(name: &str) -> bool {
    name.chars().next().is_some_and(|c| c.is_ascii_uppercase())
}

// Constructor helpers; these keep programmatic formula building readable.
pub fn rel(name: &str, args: &[&str]) -> Formula {
    Formula::Rel(name.into(), args.iter().map(|a| a.to_string()).collect())
}
pub fn eq(a: &str, b: &str) -> Formula {
    Formula::Eq(a.into(), b.into())
}
pub fn member(x: &str, set: &str) -> Formula {
    Formula::In(x.into(), set.into())
}
pub fn modular(set: &str, a: u32, p: u32) -> Formula {
    Formula::Mod(set.into(), a, p)
}
pub fn not(f: Formula) -> Formula {
    Formula::Not(Box::new(f))
}
pub fn and(a: Formula, b: Formula) -> Formula {
    Formula::And(Box::new(a), Box::new(b))
}
pub fn or(a: Formula, b: Formula) -> Formula {
    Formula::Or(Box::new(a), Box::new(b))
}
pub fn implies(a: Formula, b: Formula) -> Formula {
    Formula::Implies(Box::new(a), Box::new(b))
}
pub fn exists(v: &str, f: Formula) -> Formula {
    Formula::Exists(v.into(), Box::new(f))
}
pub fn forall(v: &str, f: Formula) -> Formula {
    Formula::Forall(v.into(), Box::new(f))
}
pub fn exists_set(v: &str, f: Formula) -> Formula {
    Formula::ExistsSet(v.into(), Box::new(f))
}
pub fn forall_set(v: &str, f: Formula) -> Formula {
    Formula::ForallSet(v.into(), Box::new(f))
}

/// n-ary conjunction; empty input yields a tautology.
pub fn and_all(fs: impl IntoIterator<Item = Formula>) -> Formula {
    let mut it = fs.into_iter();
    match it.next() {
        None => tautology(),
        Some(first) => it.fold(first, and),
    }
}

pub fn or_all(fs: impl IntoIterator<Item = Formula>) -> Formula {
    let mut it = fs.into_iter();
    match it.next() {
        None => not(tautology()),
        Some(first) => it.fold(first, or),
    }
}

/// A closed tautology usable over any signature.
pub fn tautology() -> Formula {
    forall("tautz", eq("tautz", "tautz"))
}

pub fn iff(a: Formula, b: Formula) -> Formula {
    and(implies(a.clone(), b.clone()), implies(b, a))
}

pub fn xor(a: Formula, b: Formula) -> Formula {
    not(iff(a, b))
}

impl Formula {
    /// Free first-order and monadic variables.
    pub fn free_vars(&self) -> (BTreeSet<String>, BTreeSet<String>) {
        let mut fo = BTreeSet::new();
        let mut mo = BTreeSet::new();
        self.collect_free(&mut BTreeSet::new(), &mut fo, &mut mo);
        (fo, mo)
    }

    fn collect_free(
        &self,
        bound: &mut BTreeSet<String>,
        fo: &mut BTreeSet<String>,
        mo: &mut BTreeSet<String>,
    ) {
        match self {
            Formula::Rel(_, args) => {
                for a in args {
                    if !bound.contains(a) {
                        fo.insert(a.clone());
                    }
                }
            }
            Formula::Eq(a, b) => {
                for v in [a, b] {
                    if !bound.contains(v) {
                        fo.insert(v.clone());
                    }
                }
            }
            Formula::In(x, set) => {
                if !bound.contains(x) {
                    fo.insert(x.clone());
                }
                if !bound.contains(set) {
                    mo.insert(set.clone());
                }
            }
            Formula::Mod(set, _, _) => {
                if !bound.contains(set) {
                    mo.insert(set.clone());
                }
            }
            Formula::Not(f) => f.collect_free(bound, fo, mo),
            Formula::And(a, b) | Formula::Or(a, b) | Formula::Implies(a, b) => {
                a.collect_free(bound, fo, mo);
                b.collect_free(bound, fo, mo);
            }
            Formula::Exists(v, f)
            | Formula::Forall(v, f)
            | Formula::ExistsSet(v, f)
            | Formula::ForallSet(v, f) => {
                let fresh = bound.insert(v.clone());
                f.collect_free(bound, fo, mo);
                if fresh {
                    bound.remove(v);
                }
            }
        }
    }

    /// Every variable name occurring anywhere (free or bound).
    pub fn all_var_names(&self, out: &mut BTreeSet<String>) {
        match self {
            Formula::Rel(_, args) => out.extend(args.iter().cloned()),
            Formula::Eq(a, b) => {
                out.insert(a.clone());
                out.insert(b.clone());
            }
            Formula::In(x, set) => {
                out.insert(x.clone());
                out.insert(set.clone());
            }
            Formula::Mod(set, _, _) => {
                out.insert(set.clone());
            }
            Formula::Not(f) => f.all_var_names(out),
            Formula::And(a, b) | Formula::Or(a, b) | Formula::Implies(a, b) => {
                a.all_var_names(out);
                b.all_var_names(out);
            }
            Formula::Exists(v, f)
            | Formula::Forall(v, f)
            | Formula::ExistsSet(v, f)
            | Formula::ForallSet(v, f) => {
                out.insert(v.clone());
                f.all_var_names(out);
            }
        }
    }

    /// Relation names used in atoms.
    pub fn relation_names(&self, out: &mut BTreeSet<String>) {
        match self {
            Formula::Rel(r, _) => {
                out.insert(r.clone());
            }
            Formula::Eq(..) | Formula::In(..) | Formula::Mod(..) => {}
            Formula::Not(f) => f.relation_names(out),
            Formula::And(a, b) | Formula::Or(a, b) | Formula::Implies(a, b) => {
                a.relation_names(out);
                b.relation_names(out);
            }
            Formula::Exists(_, f)
            | Formula::Forall(_, f)
            | Formula::ExistsSet(_, f)
            | Formula::ForallSet(_, f) => f.relation_names(out),
        }
    }

    /// Well-formedness: sort discipline on variables, modulus ranges,
    /// dialect gate, and no rebinding of an in-scope name.
    pub fn validate(&self, dialect: Dialect) -> Result<(), LogicError> {
        self.validate_rec(dialect, &mut BTreeSet::new())
    }

    fn validate_rec(
        &self,
        dialect: Dialect,
        scope: &mut BTreeSet<String>,
    ) -> Result<(), LogicError> {
        match self {
            Formula::Rel(_, args) => {
                for a in args {
                    if is_set_var(a) {
                        return Err(LogicError::NotFirstOrder(a.clone()));
                    }
                }
                Ok(())
            }
            Formula::Eq(a, b) => {
                for v in [a, b] {
                    if is_set_var(v) {
                        return Err(LogicError::NotFirstOrder(v.clone()));
                    }
                }
                Ok(())
            }
            Formula::In(x, set) => {
                if is_set_var(x) {
                    return Err(LogicError::NotFirstOrder(x.clone()));
                }
                if !is_set_var(set) {
                    return Err(LogicError::NotMonadic(set.clone()));
                }
                Ok(())
            }
            Formula::Mod(set, a, p) => {
                if !is_set_var(set) {
                    return Err(LogicError::NotMonadic(set.clone()));
                }
                if *p < 2 || a >= p {
                    return Err(LogicError::BadModulus { a: *a, p: *p });
                }
                if !dialect.admits(*p) {
                    return Err(LogicError::DialectViolation {
                        x: set.clone(),
                        a: *a,
                        p: *p,
                        dialect,
                    });
                }
                Ok(())
            }
            Formula::Not(f) => f.validate_rec(dialect, scope),
            Formula::And(a, b) | Formula::Or(a, b) | Formula::Implies(a, b) => {
                a.validate_rec(dialect, scope)?;
                b.validate_rec(dialect, scope)
            }
            Formula::Exists(v, f) | Formula::Forall(v, f) => {
                if is_set_var(v) {
                    return Err(LogicError::NotFirstOrder(v.clone()));
                }
                if !scope.insert(v.clone()) {
                    return Err(LogicError::Shadowed(v.clone()));
                }
                let r = f.validate_rec(dialect, scope);
                scope.remove(v);
                r
            }
            Formula::ExistsSet(v, f) | Formula::ForallSet(v, f) => {
                if !is_set_var(v) {
                    return Err(LogicError::NotMonadic(v.clone()));
                }
                if !scope.insert(v.clone()) {
                    return Err(LogicError::Shadowed(v.clone()));
                }
                let r = f.validate_rec(dialect, scope);
                scope.remove(v);
                r
            }
        }
    }

    /// Smallest dialect admitting every modular atom in the formula.
    pub fn minimal_dialect(&self) -> Dialect {
        match self {
            Formula::Mod(_, _, 2) => Dialect::C2Mso,
            Formula::Mod(_, _, _) => Dialect::Cmso,
            Formula::Rel(..) | Formula::Eq(..) | Formula::In(..) => Dialect::Mso,
            Formula::Not(f) => f.minimal_dialect(),
            Formula::And(a, b) | Formula::Or(a, b) | Formula::Implies(a, b) => {
                a.minimal_dialect().max(b.minimal_dialect())
            }
            Formula::Exists(_, f)
            | Formula::Forall(_, f)
            | Formula::ExistsSet(_, f)
            | Formula::ForallSet(_, f) => f.minimal_dialect(),
        }
    }

    /// Substitute free first-order variables through `map`. Bound names
    /// must not collide with substitution sources or targets; callers
    /// freshen bound variables first (see [`rename_bound`]).
    pub fn substitute_fo(&self, map: &BTreeMap<String, String>) -> Formula {
        let sub = |v: &String| map.get(v).cloned().unwrap_or_else(|| v.clone());
        match self {
            Formula::Rel(r, args) => Formula::Rel(r.clone(), args.iter().map(sub).collect()),
            Formula::Eq(a, b) => Formula::Eq(sub(a), sub(b)),
            Formula::In(x, set) => Formula::In(sub(x), set.clone()),
            Formula::Mod(..) => self.clone(),
            Formula::Not(f) => not(f.substitute_fo(map)),
            Formula::And(a, b) => and(a.substitute_fo(map), b.substitute_fo(map)),
            Formula::Or(a, b) => or(a.substitute_fo(map), b.substitute_fo(map)),
            Formula::Implies(a, b) => implies(a.substitute_fo(map), b.substitute_fo(map)),
            Formula::Exists(v, f) | Formula::Forall(v, f) => {
                debug_assert!(!map.contains_key(v), "capture of bound variable `{v}`");
                debug_assert!(
                    !map.values().any(|t| t == v),
                    "bound variable `{v}` captures a substitution target"
                );
                let body = f.substitute_fo(map);
                if matches!(self, Formula::Exists(..)) {
                    exists(v, body)
                } else {
                    forall(v, body)
                }
            }
            Formula::ExistsSet(v, f) => exists_set(v, f.substitute_fo(map)),
            Formula::ForallSet(v, f) => forall_set(v, f.substitute_fo(map)),
        }
    }
}

/// Supply of fresh variable names avoiding a used set.
pub struct FreshNames {
    used: BTreeSet<String>,
    counter: usize,
}

impl FreshNames {
    pub fn avoiding(used: BTreeSet<String>) -> Self {
        FreshNames { used, counter: 0 }
    }

    pub fn for_formulas<'a>(fs: impl IntoIterator<Item = &'a Formula>) -> Self {
        let mut used = BTreeSet::new();
        for f in fs {
            f.all_var_names(&mut used);
        }
        Self::avoiding(used)
    }

    pub fn fresh_fo(&mut self) -> String {
        self.fresh_with("v")
    }

    pub fn fresh_set(&mut self) -> String {
        self.fresh_with("W")
    }

    fn fresh_with(&mut self, prefix: &str) -> String {
        loop {
            let cand = format!("{}{}", prefix, self.counter);
            self.counter += 1;
            if self.used.insert(cand.clone()) {
                return cand;
            }
        }
    }

    pub fn reserve(&mut self, name: &str) {
        self.used.insert(name.to_string());
    }
}

/// Rename every bound variable of `f` to a fresh name. Used before
/// substitution to rule out capture.
pub fn rename_bound(f: &Formula, fresh: &mut FreshNames) -> Formula {
    fn go(f: &Formula, fresh: &mut FreshNames, env: &BTreeMap<String, String>) -> Formula {
        let look = |v: &String| env.get(v).cloned().unwrap_or_else(|| v.clone());
        match f {
            Formula::Rel(r, args) => Formula::Rel(r.clone(), args.iter().map(look).collect()),
            Formula::Eq(a, b) => Formula::Eq(look(a), look(b)),
            Formula::In(x, set) => Formula::In(look(x), look(set)),
            Formula::Mod(set, a, p) => Formula::Mod(look(set), *a, *p),
            Formula::Not(g) => not(go(g, fresh, env)),
            Formula::And(a, b) => and(go(a, fresh, env), go(b, fresh, env)),
            Formula::Or(a, b) => or(go(a, fresh, env), go(b, fresh, env)),
            Formula::Implies(a, b) => implies(go(a, fresh, env), go(b, fresh, env)),
            Formula::Exists(v, g) | Formula::Forall(v, g) => {
                let nv = fresh.fresh_fo();
                let mut env2 = env.clone();
                env2.insert(v.clone(), nv.clone());
                let body = go(g, fresh, &env2);
                if matches!(f, Formula::Exists(..)) {
                    exists(&nv, body)
                } else {
                    forall(&nv, body)
                }
            }
            Formula::ExistsSet(v, g) | Formula::ForallSet(v, g) => {
                let nv = fresh.fresh_set();
                let mut env2 = env.clone();
                env2.insert(v.clone(), nv.clone());
                let body = go(g, fresh, &env2);
                if matches!(f, Formula::ExistsSet(..)) {
                    exists_set(&nv, body)
                } else {
                    forall_set(&nv, body)
                }
            }
        }
    }
    go(f, fresh, &BTreeMap::new())
}

/// A value assigned to a variable: an element or an element set.
#[derive(Clone, PartialEq, Eq, Debug)]
pub enum Value {
    Elem(u32),
    Set(ElemSet),
}

/// Finite mapping from variables to elements / element sets of one
/// structure's domain.
#[derive(Clone, Default, PartialEq, Eq, Debug)]
pub struct Valuation {
    bindings: BTreeMap<String, Value>,
}

impl Valuation {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn bind_elem(mut self, var: &str, e: u32) -> Self {
        self.bindings.insert(var.to_string(), Value::Elem(e));
        self
    }

    pub fn bind_set(mut self, var: &str, s: ElemSet) -> Self {
        self.bindings.insert(var.to_string(), Value::Set(s));
        self
    }

    pub fn get(&self, var: &str) -> Option<&Value> {
        self.bindings.get(var)
    }

    pub fn iter(&self) -> impl Iterator<Item = (&String, &Value)> {
        self.bindings.iter()
    }
}

/// A formula with its free first-order variables split into object
/// variables and parameter variables.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct PartitionedFormula {
    formula: Formula,
    objects: Vec<String>,
    params: Vec<String>,
    dialect: Dialect,
}

impl PartitionedFormula {
    pub fn new(
        formula: Formula,
        objects: Vec<String>,
        params: Vec<String>,
        dialect: Dialect,
    ) -> Result<Self, LogicError> {
        formula.validate(dialect)?;
        if objects.is_empty() {
            return Err(LogicError::NoObjects(
                "need at least one object variable".into(),
            ));
        }
        let mut declared = BTreeSet::new();
        for v in objects.iter().chain(&params) {
            if is_set_var(v) {
                return Err(LogicError::NotFirstOrder(v.clone()));
            }
            if !declared.insert(v.clone()) {
                return Err(LogicError::OverlappingPartition(v.clone()));
            }
        }
        let (fo, mo) = formula.free_vars();
        if let Some(x) = mo.iter().next() {
            return Err(LogicError::FreeMonadic(x.clone()));
        }
        for v in &fo {
            if !declared.contains(v) {
                return Err(LogicError::PartitionMismatch(v.clone()));
            }
        }
        // Declared variables not occurring in the formula are allowed:
        // they still range over the domain, they just never constrain it.
        Ok(PartitionedFormula {
            formula,
            objects,
            params,
            dialect,
        })
    }

    pub fn formula(&self) -> &Formula {
        &self.formula
    }

    pub fn objects(&self) -> &[String] {
        &self.objects
    }

    pub fn params(&self) -> &[String] {
        &self.params
    }

    pub fn dialect(&self) -> Dialect {
        self.dialect
    }

    /// Same partition shape with a rewritten formula body.
    pub fn with_formula(&self, formula: Formula, dialect: Dialect) -> Result<Self, LogicError> {
        PartitionedFormula::new(formula, self.objects.clone(), self.params.clone(), dialect)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn free_vars_and_validation() {
        let f = exists("x", and(rel("E", &["x", "y"]), member("x", "X")));
        let (fo, mo) = f.free_vars();
        assert_eq!(fo.into_iter().collect::<Vec<_>>(), vec!["y"]);
        assert_eq!(mo.into_iter().collect::<Vec<_>>(), vec!["X"]);
        f.validate(Dialect::Mso).unwrap();

        let bad = exists("x", exists("x", eq("x", "x")));
        assert!(matches!(
            bad.validate(Dialect::Mso),
            Err(LogicError::Shadowed(_))
        ));

        let m = modular("X", 0, 2);
        assert!(m.validate(Dialect::Mso).is_err());
        m.validate(Dialect::C2Mso).unwrap();
        assert!(modular("X", 1, 3).validate(Dialect::C2Mso).is_err());
        modular("X", 1, 3).validate(Dialect::Cmso).unwrap();
        assert!(modular("X", 3, 3).validate(Dialect::Cmso).is_err());
    }

    #[test]
    fn partition_checks() {
        let f = or(eq("x", "y1"), eq("x", "y2"));
        let pf = PartitionedFormula::new(
            f.clone(),
            vec!["x".into()],
            vec!["y1".into(), "y2".into()],
            Dialect::Mso,
        )
        .unwrap();
        assert_eq!(pf.objects(), ["x"]);

        assert!(PartitionedFormula::new(
            f.clone(),
            vec!["x".into()],
            vec!["y1".into()],
            Dialect::Mso
        )
        .is_err());
        assert!(PartitionedFormula::new(
            f,
            vec![],
            vec!["x".into(), "y1".into(), "y2".into()],
            Dialect::Mso
        )
        .is_err());
    }

    #[test]
    fn rename_bound_avoids_capture() {
        let f = exists("x", rel("E", &["x", "y"]));
        let mut fresh = FreshNames::for_formulas([&f]);
        let renamed = rename_bound(&f, &mut fresh);
        let sub: BTreeMap<String, String> = [("y".to_string(), "x".to_string())].into();
        let substituted = renamed.substitute_fo(&sub);
        let (fo, _) = substituted.free_vars();
        assert_eq!(fo.into_iter().collect::<Vec<_>>(), vec!["x"]);
    }
}
