//! Quantified 3CNF formulas, the restricted canonical form used by the
//! reductions, and QDIMACS-style text I/O.
//!
//! Canonical form: at least 2 clauses, each clause has 2 or 3 distinct
//! variables, every appearing variable occurs once or twice positively and
//! exactly once negatively.

use std::collections::BTreeSet;
use std::fmt::Write as _;

use crate::error::{ParseError, ReductionError};

/// A literal: a 0-based variable index with a polarity.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Lit {
    pub var: usize,
    pub positive: bool,
}

impl Lit {
    pub fn pos(var: usize) -> Lit {
        Lit {
            var,
            positive: true,
        }
    }

    pub fn neg(var: usize) -> Lit {
        Lit {
            var,
            positive: false,
        }
    }

    pub fn satisfied_by(&self, assignment: &[bool]) -> bool {
        assignment[self.var] == self.positive
    }
}

/// A 3CNF formula with a universal/existential partition of its variables.
/// Unquantified use treats every variable as existential.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct QuantifiedCnf {
    pub num_vars: usize,
    pub universal: BTreeSet<usize>,
    pub clauses: Vec<Vec<Lit>>,
}

impl QuantifiedCnf {
    pub fn new(num_vars: usize, clauses: Vec<Vec<Lit>>) -> QuantifiedCnf {
        QuantifiedCnf {
            num_vars,
            universal: BTreeSet::new(),
            clauses,
        }
    }

    pub fn with_universal(
        num_vars: usize,
        universal: impl IntoIterator<Item = usize>,
        clauses: Vec<Vec<Lit>>,
    ) -> QuantifiedCnf {
        QuantifiedCnf {
            num_vars,
            universal: universal.into_iter().collect(),
            clauses,
        }
    }

    pub fn is_universal(&self, var: usize) -> bool {
        self.universal.contains(&var)
    }

    /// Variables that actually occur, in increasing order.
    pub fn appearing_vars(&self) -> Vec<usize> {
        let mut vars: BTreeSet<usize> = BTreeSet::new();
        for clause in &self.clauses {
            for lit in clause {
                vars.insert(lit.var);
            }
        }
        vars.into_iter().collect()
    }

    /// (positive, negative) occurrence counts of a variable.
    pub fn occurrences(&self, var: usize) -> (usize, usize) {
        let mut pos = 0;
        let mut neg = 0;
        for clause in &self.clauses {
            for lit in clause {
                if lit.var == var {
                    if lit.positive {
                        pos += 1;
                    } else {
                        neg += 1;
                    }
                }
            }
        }
        (pos, neg)
    }

    /// None when canonical, otherwise the first violated requirement.
    pub fn canonical_violation(&self) -> Option<String> {
        if self.clauses.len() < 2 {
            return Some(format!("only {} clause(s)", self.clauses.len()));
        }
        for (i, clause) in self.clauses.iter().enumerate() {
            if clause.len() < 2 || clause.len() > 3 {
                return Some(format!("clause {} has {} literals", i, clause.len()));
            }
            let vars: BTreeSet<usize> = clause.iter().map(|l| l.var).collect();
            if vars.len() != clause.len() {
                return Some(format!("clause {i} repeats a variable"));
            }
        }
        for v in self.appearing_vars() {
            let (pos, neg) = self.occurrences(v);
            if !(1..=2).contains(&pos) {
                return Some(format!("x{v} has {pos} positive occurrences"));
            }
            if neg != 1 {
                return Some(format!("x{v} has {neg} negative occurrences"));
            }
        }
        None
    }

    pub fn is_canonical(&self) -> bool {
        self.canonical_violation().is_none()
    }

    pub fn evaluate(&self, assignment: &[bool]) -> bool {
        self.clauses
            .iter()
            .all(|clause| clause.iter().any(|lit| lit.satisfied_by(assignment)))
    }

    /// Plain satisfiability by truth table over the appearing variables,
    /// ignoring quantifiers. Desk scale only.
    pub fn is_satisfiable(&self) -> bool {
        self.satisfying_assignment().is_some()
    }

    pub fn satisfying_assignment(&self) -> Option<Vec<bool>> {
        let vars = self.appearing_vars();
        assert!(vars.len() <= 24, "truth tables are desk-scale only");
        let mut assignment = vec![false; self.num_vars];
        for mask in 0u64..(1 << vars.len()) {
            for (i, &v) in vars.iter().enumerate() {
                assignment[v] = (mask >> i) & 1 == 1;
            }
            if self.evaluate(&assignment) {
                return Some(assignment);
            }
        }
        None
    }

    /// Validity: for every setting of the universally quantified variables
    /// there is a setting of the existential ones satisfying the formula.
    pub fn is_valid(&self) -> bool {
        let vars = self.appearing_vars();
        let universal: Vec<usize> = vars
            .iter()
            .copied()
            .filter(|v| self.is_universal(*v))
            .collect();
        let existential: Vec<usize> = vars
            .iter()
            .copied()
            .filter(|v| !self.is_universal(*v))
            .collect();
        assert!(vars.len() <= 24, "truth tables are desk-scale only");
        let mut assignment = vec![false; self.num_vars];
        for umask in 0u64..(1 << universal.len()) {
            for (i, &v) in universal.iter().enumerate() {
                assignment[v] = (umask >> i) & 1 == 1;
            }
            let mut ok = false;
            for emask in 0u64..(1 << existential.len()) {
                for (i, &v) in existential.iter().enumerate() {
                    assignment[v] = (emask >> i) & 1 == 1;
                }
                if self.evaluate(&assignment) {
                    ok = true;
                    break;
                }
            }
            if !ok {
                return false;
            }
        }
        true
    }
}

/// Result of canonicalization: either a canonical formula or a formula that
/// simplified below two clauses, in which case its truth value is settled
/// directly.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum CanonicalOutcome {
    Canonical(QuantifiedCnf),
    /// Simplification emptied the clause set; the flag is the verdict for
    /// the original formula (satisfiability, or validity when quantified).
    TriviallyDecided(bool),
}

/// Rewrites a restricted formula (>= 2 clauses, clause sizes 2-3, each
/// variable at most 3 occurrences) into canonical form: existential
/// variables that appear in only one polarity are fixed and their satisfied
/// clauses removed; variables with two negative occurrences have their
/// polarity flipped. Preserves satisfiability, and validity when
/// quantified. Pure universal variables are rejected rather than silently
/// mis-simplified: fixing one is not validity-preserving in general.
pub fn canonicalize_3cnf(f: &QuantifiedCnf) -> Result<CanonicalOutcome, ReductionError> {
    if f.clauses.len() < 2 {
        return Err(ReductionError::NotRestricted(format!(
            "only {} clause(s)",
            f.clauses.len()
        )));
    }
    for (i, clause) in f.clauses.iter().enumerate() {
        if clause.len() < 2 || clause.len() > 3 {
            return Err(ReductionError::NotRestricted(format!(
                "clause {} has {} literals",
                i,
                clause.len()
            )));
        }
        let vars: BTreeSet<usize> = clause.iter().map(|l| l.var).collect();
        if vars.len() != clause.len() {
            return Err(ReductionError::NotRestricted(format!(
                "clause {i} repeats a variable"
            )));
        }
    }
    for v in f.appearing_vars() {
        let (pos, neg) = f.occurrences(v);
        if pos + neg > 3 {
            return Err(ReductionError::NotRestricted(format!(
                "x{v} occurs {} times",
                pos + neg
            )));
        }
    }

    let mut cur = f.clone();
    loop {
        if cur.clauses.len() < 2 {
            let verdict = if cur.universal.is_empty() {
                cur.is_satisfiable()
            } else {
                cur.is_valid()
            };
            return Ok(CanonicalOutcome::TriviallyDecided(verdict));
        }
        let mut changed = false;
        for v in cur.appearing_vars() {
            let (pos, neg) = cur.occurrences(v);
            if pos == 0 || neg == 0 {
                // Pure literal: fix it and drop the satisfied clauses.
                if cur.is_universal(v) {
                    return Err(ReductionError::PureUniversal(v));
                }
                let keep_polarity = neg > 0;
                cur.clauses.retain(|clause| {
                    !clause
                        .iter()
                        .any(|l| l.var == v && l.positive != keep_polarity)
                });
                changed = true;
                break;
            }
            if neg == 2 {
                // Flip every occurrence of v.
                for clause in &mut cur.clauses {
                    for lit in clause.iter_mut() {
                        if lit.var == v {
                            lit.positive = !lit.positive;
                        }
                    }
                }
                changed = true;
                break;
            }
        }
        if !changed {
            debug_assert!(cur.is_canonical(), "fixed point must be canonical");
            return Ok(CanonicalOutcome::Canonical(cur));
        }
    }
}

/// Parses QDIMACS-style text: `p cnf <vars> <clauses>`, optional `a`/`e`
/// quantifier lines, then zero-terminated clause lines.
pub fn parse_qdimacs(input: &str) -> Result<QuantifiedCnf, ParseError> {
    let mut num_vars: Option<usize> = None;
    let mut promised_clauses = 0usize;
    let mut universal: BTreeSet<usize> = BTreeSet::new();
    let mut existential: BTreeSet<usize> = BTreeSet::new();
    let mut clauses: Vec<Vec<Lit>> = Vec::new();

    for (i, raw) in input.lines().enumerate() {
        let lineno = i + 1;
        let line = raw.trim();
        if line.is_empty() || line.starts_with('c') {
            continue;
        }
        let fields: Vec<&str> = line.split_whitespace().collect();
        match fields[0] {
            "p" => {
                if num_vars.is_some() {
                    return Err(ParseError::new(lineno, "duplicate `p cnf` header"));
                }
                if fields.len() != 4 || fields[1] != "cnf" {
                    return Err(ParseError::new(lineno, "header must be `p cnf <vars> <clauses>`"));
                }
                num_vars = Some(fields[2].parse().map_err(|_| {
                    ParseError::new(lineno, format!("bad variable count `{}`", fields[2]))
                })?);
                promised_clauses = fields[3].parse().map_err(|_| {
                    ParseError::new(lineno, format!("bad clause count `{}`", fields[3]))
                })?;
            }
            "a" | "e" => {
                let n = num_vars
                    .ok_or_else(|| ParseError::new(lineno, "quantifier line before header"))?;
                let set = if fields[0] == "a" {
                    &mut universal
                } else {
                    &mut existential
                };
                for field in &fields[1..] {
                    let x: i64 = field.parse().map_err(|_| {
                        ParseError::new(lineno, format!("bad variable `{field}`"))
                    })?;
                    if x == 0 {
                        break;
                    }
                    if x < 0 || x as usize > n {
                        return Err(ParseError::new(
                            lineno,
                            format!("variable {x} out of range 1..={n}"),
                        ));
                    }
                    set.insert(x as usize - 1);
                }
            }
            _ => {
                let n = num_vars
                    .ok_or_else(|| ParseError::new(lineno, "clause line before header"))?;
                let mut clause = Vec::new();
                let mut terminated = false;
                for field in &fields {
                    let x: i64 = field.parse().map_err(|_| {
                        ParseError::new(lineno, format!("bad literal `{field}`"))
                    })?;
                    if x == 0 {
                        terminated = true;
                        break;
                    }
                    let var = x.unsigned_abs() as usize;
                    if var > n {
                        return Err(ParseError::new(
                            lineno,
                            format!("variable {var} out of range 1..={n}"),
                        ));
                    }
                    clause.push(Lit {
                        var: var - 1,
                        positive: x > 0,
                    });
                }
                if !terminated {
                    return Err(ParseError::new(lineno, "clause is not zero-terminated"));
                }
                clauses.push(clause);
            }
        }
    }

    let num_vars =
        num_vars.ok_or_else(|| ParseError::new(input.lines().count() + 1, "missing header"))?;
    if clauses.len() != promised_clauses {
        return Err(ParseError::new(
            input.lines().count() + 1,
            format!(
                "header promises {promised_clauses} clauses but {} were given",
                clauses.len()
            ),
        ));
    }
    if let Some(&v) = universal.intersection(&existential).next() {
        return Err(ParseError::new(
            input.lines().count() + 1,
            format!("variable {} is quantified both ways", v + 1),
        ));
    }
    Ok(QuantifiedCnf {
        num_vars,
        universal,
        clauses,
    })
}

pub fn write_qdimacs(f: &QuantifiedCnf) -> String {
    let mut out = String::new();
    writeln!(out, "p cnf {} {}", f.num_vars, f.clauses.len()).unwrap();
    if !f.universal.is_empty() {
        write!(out, "a").unwrap();
        for &v in &f.universal {
            write!(out, " {}", v + 1).unwrap();
        }
        writeln!(out, " 0").unwrap();
        let existential: Vec<usize> =
            (0..f.num_vars).filter(|v| !f.universal.contains(v)).collect();
        if !existential.is_empty() {
            write!(out, "e").unwrap();
            for v in existential {
                write!(out, " {}", v + 1).unwrap();
            }
            writeln!(out, " 0").unwrap();
        }
    }
    for clause in &f.clauses {
        for lit in clause {
            let x = (lit.var + 1) as i64;
            write!(out, "{} ", if lit.positive { x } else { -x }).unwrap();
        }
        writeln!(out, "0").unwrap();
    }
    out
}

/// The worked example formula:
/// (w | x) & (w | !x) & (!w | y | z) & (x | !y | !z).
pub fn example_formula() -> QuantifiedCnf {
    let (w, x, y, z) = (0, 1, 2, 3);
    QuantifiedCnf::new(
        4,
        vec![
            vec![Lit::pos(w), Lit::pos(x)],
            vec![Lit::pos(w), Lit::neg(x)],
            vec![Lit::neg(w), Lit::pos(y), Lit::pos(z)],
            vec![Lit::pos(x), Lit::neg(y), Lit::neg(z)],
        ],
    )
}

#[cfg(test)]
mod tests {
    use super::*;

    fn two_clause() -> QuantifiedCnf {
        // (w | x) & (!w | !x)
        QuantifiedCnf::new(
            2,
            vec![
                vec![Lit::pos(0), Lit::pos(1)],
                vec![Lit::neg(0), Lit::neg(1)],
            ],
        )
    }

    #[test]
    fn already_canonical_is_a_fixed_point() {
        let f = two_clause();
        assert!(f.is_canonical());
        assert_eq!(
            canonicalize_3cnf(&f).unwrap(),
            CanonicalOutcome::Canonical(f)
        );
    }

    #[test]
    fn example_formula_is_canonical_and_satisfiable() {
        let f = example_formula();
        assert!(f.is_canonical());
        assert!(f.is_satisfiable());
    }

    #[test]
    fn pure_positive_variable_removes_its_clauses() {
        // (w | x) & (x | y) & (!x | !y): w is pure positive.
        let f = QuantifiedCnf::new(
            3,
            vec![
                vec![Lit::pos(0), Lit::pos(1)],
                vec![Lit::pos(1), Lit::pos(2)],
                vec![Lit::neg(1), Lit::neg(2)],
            ],
        );
        let before = f.is_satisfiable();
        match canonicalize_3cnf(&f).unwrap() {
            CanonicalOutcome::Canonical(g) => {
                assert!(g.is_canonical());
                assert_eq!(g.is_satisfiable(), before);
                assert_eq!(g.clauses.len(), 2);
            }
            CanonicalOutcome::TriviallyDecided(v) => assert_eq!(v, before),
        }
    }

    #[test]
    fn double_negative_flips_polarity() {
        // x: 1 positive, 2 negative -> flipped to 2 positive, 1 negative.
        let f = QuantifiedCnf::new(
            3,
            vec![
                vec![Lit::pos(0), Lit::neg(1)],
                vec![Lit::neg(0), Lit::pos(1)],
                vec![Lit::neg(0), Lit::pos(2), Lit::neg(2)],
            ],
        );
        // Clause 2 repeats variable 2; restricted form rejects it.
        assert!(matches!(
            canonicalize_3cnf(&f),
            Err(ReductionError::NotRestricted(_))
        ));

        let f = QuantifiedCnf::new(
            3,
            vec![
                vec![Lit::pos(0), Lit::neg(1)],
                vec![Lit::neg(0), Lit::pos(1)],
                vec![Lit::neg(0), Lit::pos(1), Lit::pos(2)],
            ],
        );
        let before = f.is_satisfiable();
        match canonicalize_3cnf(&f).unwrap() {
            CanonicalOutcome::Canonical(g) => {
                assert!(g.is_canonical());
                assert_eq!(g.is_satisfiable(), before);
                // The flip leaves exactly one negative occurrence of x0
                // (the later pure-literal pass may drop a positive one).
                let (pos, neg) = g.occurrences(0);
                assert_eq!(neg, 1);
                assert!((1..=2).contains(&pos));
            }
            CanonicalOutcome::TriviallyDecided(v) => assert_eq!(v, before),
        }
    }

    #[test]
    fn pure_universal_is_rejected() {
        let f = QuantifiedCnf::with_universal(
            2,
            [0],
            vec![
                vec![Lit::pos(0), Lit::pos(1)],
                vec![Lit::pos(0), Lit::neg(1)],
            ],
        );
        assert_eq!(canonicalize_3cnf(&f), Err(ReductionError::PureUniversal(0)));
    }

    #[test]
    fn validity_distinguishes_quantifiers() {
        // (x | y) & (!x | !y): valid with x universal (pick y = !x), and
        // satisfiable but not valid with both universal.
        let f = QuantifiedCnf::with_universal(
            2,
            [0],
            vec![
                vec![Lit::pos(0), Lit::pos(1)],
                vec![Lit::neg(0), Lit::neg(1)],
            ],
        );
        assert!(f.is_valid());
        let g = QuantifiedCnf::with_universal(2, [0, 1], f.clauses.clone());
        assert!(!g.is_valid());
        assert!(g.is_satisfiable());
    }

    #[test]
    fn qdimacs_round_trip() {
        let f = QuantifiedCnf::with_universal(
            3,
            [0],
            vec![
                vec![Lit::pos(0), Lit::pos(1)],
                vec![Lit::neg(0), Lit::neg(1), Lit::pos(2)],
            ],
        );
        let text = write_qdimacs(&f);
        let g = parse_qdimacs(&text).unwrap();
        assert_eq!(f, g);
    }

    #[test]
    fn qdimacs_rejects_malformed_input() {
        assert!(parse_qdimacs("p cnf 2 1\n1 2\n").is_err());
        assert!(parse_qdimacs("1 2 0\n").is_err());
        let err = parse_qdimacs("p cnf 2 1\n1 3 0\n").unwrap_err();
        assert_eq!(err.line, 2);
    }
}
