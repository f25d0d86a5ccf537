//! Propositional encoding of flat formulas.
//!
//! Every sign variable `v` is represented by a pair of propositional
//! variables `(v+, v-)`: `(1,0)` means positive, `(0,1)` negative and
//! `(0,0)` zero, with `(1,1)` ruled out by an exclusion clause. Operator
//! atoms become exact clause schemas over three pairs: satisfying
//! assignments project precisely onto the triples of the corresponding
//! sign relation. Species-valued pairs additionally carry a unit clause
//! banning the negative sign.

use std::collections::HashMap;

use crate::flatten::{FlatAtom, FlatFormula};
use crate::sign::{Op, Sign};
use crate::term::AnnotatedVar;

/// The mapping from sign variables to propositional variable pairs.
///
/// Pairs are handed out in registration order — species (current then
/// next, in declaration order), the existential prefix, then any
/// variables first seen in an atom, then difference helpers minted while
/// lowering comparisons. Single auxiliary variables (activation literals
/// and the like) can be minted after encoding; they extend the variable
/// space but never carry a sign.
#[derive(Debug, Clone)]
pub struct VarRegistry {
    order: Vec<AnnotatedVar>,
    pairs: HashMap<AnnotatedVar, (i32, i32)>,
    aux: Vec<(String, i32)>,
    next: i32,
}

impl VarRegistry {
    fn new() -> VarRegistry {
        VarRegistry { order: Vec::new(), pairs: HashMap::new(), aux: Vec::new(), next: 1 }
    }

    fn register(&mut self, v: &AnnotatedVar) -> (i32, i32) {
        if let Some(&p) = self.pairs.get(v) {
            return p;
        }
        let p = (self.next, self.next + 1);
        self.next += 2;
        self.order.push(v.clone());
        self.pairs.insert(v.clone(), p);
        p
    }

    /// The propositional pair of a sign variable, if it was encoded.
    pub fn pair(&self, v: &AnnotatedVar) -> Option<(i32, i32)> {
        self.pairs.get(v).copied()
    }

    /// All encoded sign variables with their pairs, in registration order.
    pub fn vars(&self) -> impl Iterator<Item = (&AnnotatedVar, (i32, i32))> {
        self.order.iter().map(move |v| (v, self.pairs[v]))
    }

    /// Number of propositional variables handed out so far.
    pub fn num_vars(&self) -> i32 {
        self.next - 1
    }

    /// Mint a single propositional variable outside the pair space, for
    /// activation literals and guards.
    pub fn fresh_aux(&mut self, label: impl Into<String>) -> i32 {
        let x = self.next;
        self.next += 1;
        self.aux.push((label.into(), x));
        x
    }

    /// Auxiliary variables minted so far, with their labels.
    pub fn aux(&self) -> &[(String, i32)] {
        &self.aux
    }

    pub fn len(&self) -> usize {
        self.order.len()
    }

    pub fn is_empty(&self) -> bool {
        self.order.is_empty()
    }
}

/// A propositional formula in conjunctive normal form. Literals are
/// signed variable indices, DIMACS style.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Cnf {
    pub num_vars: i32,
    pub clauses: Vec<Vec<i32>>,
}

/// The exact clause schema of one operator application `c = a op b`.
///
/// The schemas assume the per-variable exclusion clauses are present;
/// together with them, the satisfying assignments are exactly the triples
/// of the operator's sign relation.
pub fn op_clauses(op: Op, a: (i32, i32), b: (i32, i32), c: (i32, i32)) -> Vec<Vec<i32>> {
    let (a0, a1) = a;
    let (b0, b1) = b;
    let (c0, c1) = c;
    match op {
        // A sum is positive only if some operand is; a positive operand
        // with no negative counterweight forces positivity. Negativity is
        // symmetric.
        Op::Add => vec![
            vec![a0, b0, -c0],
            vec![a1, b1, -c1],
            vec![-a0, b1, c0],
            vec![-b0, a1, c0],
            vec![-a1, b0, c1],
            vec![-b1, a0, c1],
        ],
        // Subtraction is addition with the right operand's polarity
        // swapped.
        Op::Sub => vec![
            vec![a0, b1, -c0],
            vec![a1, b0, -c1],
            vec![-a0, b0, c0],
            vec![-b1, a1, c0],
            vec![-a1, b1, c1],
            vec![-b0, a0, c1],
        ],
        Op::Mul => mul_clauses(a, b, c),
        // A quotient behaves like a product once the divisor is nonzero.
        Op::Div => {
            let mut out = mul_clauses(a, b, c);
            out.push(vec![b0, b1]);
            out
        }
    }
}

fn mul_clauses(a: (i32, i32), b: (i32, i32), c: (i32, i32)) -> Vec<Vec<i32>> {
    let (a0, a1) = a;
    let (b0, b1) = b;
    let (c0, c1) = c;
    vec![
        // Like signs force a positive product, unlike signs a negative
        // one.
        vec![-a0, -b0, c0],
        vec![-a1, -b1, c0],
        vec![-a0, -b1, c1],
        vec![-a1, -b0, c1],
        // Conversely a positive product needs like nonzero signs: the CNF
        // of c+ -> (a+ and b+) or (a- and b-).
        vec![-c0, a0, a1],
        vec![-c0, a0, b1],
        vec![-c0, b0, a1],
        vec![-c0, b0, b1],
        // And a negative product needs unlike ones.
        vec![-c1, a0, a1],
        vec![-c1, a0, b0],
        vec![-c1, b1, a1],
        vec![-c1, b1, b0],
    ]
}

fn atom_vars(atom: &FlatAtom) -> Vec<&AnnotatedVar> {
    match atom {
        FlatAtom::ConstDef { var, .. } => vec![var],
        FlatAtom::OpDef { var, left, right, .. } => vec![var, left, right],
        FlatAtom::Copy { var, alias } => vec![var, alias],
        FlatAtom::Nonneg { var } => vec![var],
        FlatAtom::Ge { left, right } => vec![left, right],
    }
}

/// Encode a flat formula into CNF.
///
/// Clause order is deterministic: per-variable well-formedness clauses in
/// registration order (exclusion, plus the non-negativity unit for
/// species-valued variables), then the atoms in formula order.
/// Comparison atoms are lowered on the fly by minting a difference
/// helper `d` with `d = left - right` and requiring `d` non-negative.
pub fn encode(flat: &FlatFormula) -> (Cnf, VarRegistry) {
    let mut reg = VarRegistry::new();
    for s in &flat.species {
        reg.register(&AnnotatedVar::current(s));
    }
    for s in &flat.species {
        reg.register(&AnnotatedVar::next(s));
    }
    for v in &flat.existentials {
        reg.register(v);
    }
    for atom in &flat.atoms {
        for v in atom_vars(atom) {
            reg.register(v);
        }
    }

    let mut clauses = Vec::new();
    let known: Vec<(bool, (i32, i32))> =
        reg.vars().map(|(v, p)| (v.is_species_valued(), p)).collect();
    for (species_valued, (p0, p1)) in known {
        clauses.push(vec![-p0, -p1]);
        if species_valued {
            clauses.push(vec![-p1]);
        }
    }

    let mut diffs = 0usize;
    for atom in &flat.atoms {
        match atom {
            FlatAtom::ConstDef { var, value } => {
                let (p0, p1) = reg.pair(var).expect("registered");
                let (l0, l1) = match value.sign() {
                    Sign::Pos => (p0, -p1),
                    Sign::Neg => (-p0, p1),
                    Sign::Zero => (-p0, -p1),
                };
                clauses.push(vec![l0]);
                clauses.push(vec![l1]);
            }
            FlatAtom::OpDef { var, op, left, right } => {
                let c = reg.pair(var).expect("registered");
                let a = reg.pair(left).expect("registered");
                let b = reg.pair(right).expect("registered");
                clauses.extend(op_clauses(*op, a, b, c));
            }
            FlatAtom::Copy { var, alias } => {
                let (v0, v1) = reg.pair(var).expect("registered");
                let (a0, a1) = reg.pair(alias).expect("registered");
                clauses.push(vec![-v0, a0]);
                clauses.push(vec![v0, -a0]);
                clauses.push(vec![-v1, a1]);
                clauses.push(vec![v1, -a1]);
            }
            FlatAtom::Nonneg { var } => {
                let (_, p1) = reg.pair(var).expect("registered");
                clauses.push(vec![-p1]);
            }
            FlatAtom::Ge { left, right } => {
                let a = reg.pair(left).expect("registered");
                let b = reg.pair(right).expect("registered");
                let d = loop {
                    diffs += 1;
                    let d = AnnotatedVar::helper(format!("d{diffs}"));
                    if reg.pair(&d).is_none() {
                        break d;
                    }
                };
                let (d0, d1) = reg.register(&d);
                clauses.push(vec![-d0, -d1]);
                clauses.extend(op_clauses(Op::Sub, a, b, (d0, d1)));
                clauses.push(vec![-d1]);
            }
        }
    }

    (Cnf { num_vars: reg.num_vars(), clauses }, reg)
}

/// Serialize to DIMACS, with one `c map <name> <v+> <v->` comment per
/// sign variable ahead of the problem line.
pub fn emit_dimacs(cnf: &Cnf, reg: &VarRegistry) -> String {
    let mut out = String::new();
    for (v, (p0, p1)) in reg.vars() {
        out.push_str(&format!("c map {v} {p0} {p1}\n"));
    }
    out.push_str(&format!("p cnf {} {}\n", cnf.num_vars, cnf.clauses.len()));
    for clause in &cnf.clauses {
        for lit in clause {
            out.push_str(&format!("{lit} "));
        }
        out.push_str("0\n");
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures::renz;
    use crate::flatten::flatten;
    use crate::fobnn::{build_fobnn, FobnnAtom};
    use crate::sign::SignRelation;
    use crate::term::{Constant, Term};

    fn h(name: &str) -> AnnotatedVar {
        AnnotatedVar::helper(name)
    }

    /// All satisfying assignments of a CNF, by exhaustion. Index `i`
    /// holds the value of variable `i + 1`.
    fn models(cnf: &Cnf) -> Vec<Vec<bool>> {
        let n = cnf.num_vars as usize;
        assert!(n <= 16, "exhaustive check only");
        let mut out = Vec::new();
        for bits in 0u32..1 << n {
            let holds = |lit: i32| {
                let b = bits >> (lit.unsigned_abs() - 1) & 1 == 1;
                if lit > 0 {
                    b
                } else {
                    !b
                }
            };
            if cnf.clauses.iter().all(|c| c.iter().any(|&l| holds(l))) {
                out.push((0..n).map(|i| bits >> i & 1 == 1).collect());
            }
        }
        out
    }

    fn sign_at(model: &[bool], pair: (i32, i32)) -> Sign {
        match (model[pair.0 as usize - 1], model[pair.1 as usize - 1]) {
            (true, false) => Sign::Pos,
            (false, true) => Sign::Neg,
            (false, false) => Sign::Zero,
            (true, true) => panic!("exclusion clause violated"),
        }
    }

    #[test]
    fn addition_emits_the_six_documented_clauses() {
        let flat = FlatFormula {
            species: vec![],
            existentials: vec![],
            atoms: vec![FlatAtom::OpDef {
                var: h("v"),
                op: Op::Add,
                left: h("x"),
                right: h("y"),
            }],
        };
        let (cnf, reg) = encode(&flat);
        let (c0, c1) = reg.pair(&h("v")).unwrap();
        let (a0, a1) = reg.pair(&h("x")).unwrap();
        let (b0, b1) = reg.pair(&h("y")).unwrap();
        // Three exclusion clauses, then the operator schema.
        assert_eq!(
            cnf.clauses,
            vec![
                vec![-c0, -c1],
                vec![-a0, -a1],
                vec![-b0, -b1],
                vec![a0, b0, -c0],
                vec![a1, b1, -c1],
                vec![-a0, b1, c0],
                vec![-b0, a1, c0],
                vec![-a1, b0, c1],
                vec![-b1, a0, c1],
            ]
        );
    }

    #[test]
    fn operator_clauses_project_onto_the_sign_relations() {
        for op in Op::ALL {
            let flat = FlatFormula {
                species: vec![],
                existentials: vec![],
                atoms: vec![FlatAtom::OpDef {
                    var: h("v"),
                    op,
                    left: h("x"),
                    right: h("y"),
                }],
            };
            let (cnf, reg) = encode(&flat);
            assert_eq!(cnf.num_vars, 6);
            let v = reg.pair(&h("v")).unwrap();
            let x = reg.pair(&h("x")).unwrap();
            let y = reg.pair(&h("y")).unwrap();
            let projected: std::collections::BTreeSet<(Sign, Sign, Sign)> = models(&cnf)
                .iter()
                .map(|m| (sign_at(m, x), sign_at(m, y), sign_at(m, v)))
                .collect();
            let expected: std::collections::BTreeSet<(Sign, Sign, Sign)> =
                SignRelation::of(op).triples().into_iter().collect();
            assert_eq!(projected, expected, "projection mismatch for {op:?}");
        }
    }

    #[test]
    fn division_models_never_use_a_zero_divisor() {
        let flat = FlatFormula {
            species: vec![],
            existentials: vec![],
            atoms: vec![FlatAtom::OpDef {
                var: h("v"),
                op: Op::Div,
                left: h("x"),
                right: h("y"),
            }],
        };
        let (cnf, reg) = encode(&flat);
        let y = reg.pair(&h("y")).unwrap();
        let ms = models(&cnf);
        assert!(!ms.is_empty());
        assert!(ms.iter().all(|m| sign_at(m, y) != Sign::Zero));
    }

    #[test]
    fn shared_subterms_get_independent_helpers() {
        // (x + y) * (x + y) = -1 is satisfiable relationally: with mixed
        // signs each occurrence of the sum may resolve differently.
        let x = h("x");
        let y = h("y");
        let sum = Term::add(Term::var(x.clone()), Term::var(y.clone()));
        let f = crate::fobnn::Fobnn {
            species: vec![],
            existentials: vec![],
            atoms: vec![FobnnAtom::Eq(
                Term::mul(sum.clone(), sum),
                Term::constant(Constant::num(-1)),
            )],
        };
        let (cnf, reg) = encode(&flatten(&f));
        let px = reg.pair(&x).unwrap();
        let py = reg.pair(&y).unwrap();
        let projected: std::collections::BTreeSet<(Sign, Sign)> =
            models(&cnf).iter().map(|m| (sign_at(m, px), sign_at(m, py))).collect();
        let expected: std::collections::BTreeSet<(Sign, Sign)> =
            [(Sign::Pos, Sign::Neg), (Sign::Neg, Sign::Pos)].into_iter().collect();
        assert_eq!(projected, expected);
    }

    #[test]
    fn comparison_atoms_lower_to_a_difference_helper() {
        let flat = FlatFormula {
            species: vec!["X".into()],
            existentials: vec![],
            atoms: vec![FlatAtom::Ge {
                left: AnnotatedVar::next("X"),
                right: AnnotatedVar::current("X"),
            }],
        };
        let (cnf, reg) = encode(&flat);
        // X, X' and the minted difference helper d1.
        assert_eq!(reg.len(), 3);
        assert!(reg.pair(&h("d1")).is_some());
        let x = reg.pair(&AnnotatedVar::current("X")).unwrap();
        let xn = reg.pair(&AnnotatedVar::next("X")).unwrap();
        let projected: std::collections::BTreeSet<(Sign, Sign)> =
            models(&cnf).iter().map(|m| (sign_at(m, x), sign_at(m, xn))).collect();
        // X' >= X over non-negative species signs: everything except
        // + -> 0.
        let expected: std::collections::BTreeSet<(Sign, Sign)> = [
            (Sign::Zero, Sign::Zero),
            (Sign::Zero, Sign::Pos),
            (Sign::Pos, Sign::Pos),
        ]
        .into_iter()
        .collect();
        assert_eq!(projected, expected);
    }

    #[test]
    fn registry_orders_species_then_prefix_then_helpers() {
        let f = build_fobnn(&renz()).unwrap();
        let (_, reg) = encode(&flatten(&f));
        let names: Vec<String> = reg.vars().map(|(v, _)| v.to_string()).collect();
        assert_eq!(
            &names[..8],
            &["S", "E", "C", "P", "S'", "E'", "C'", "P'"]
        );
        assert_eq!(
            &names[8..16],
            &["S.", "S'.", "E.", "E'.", "C.", "C'.", "P.", "P'."]
        );
        assert_eq!(names[16], "w1");
        // Pairs are consecutive and start at 1.
        assert_eq!(reg.pair(&AnnotatedVar::current("S")), Some((1, 2)));
        assert_eq!(reg.pair(&AnnotatedVar::current("E")), Some((3, 4)));
        assert_eq!(reg.pair(&AnnotatedVar::next("S")), Some((9, 10)));
    }

    #[test]
    fn dimacs_output_matches_the_documented_format() {
        // X = 0 over a single species.
        let x = AnnotatedVar::current("X");
        let f = crate::fobnn::Fobnn {
            species: vec!["X".into()],
            existentials: vec![],
            atoms: vec![FobnnAtom::Eq(Term::var(x), Term::zero())],
        };
        let (cnf, reg) = encode(&flatten(&f));
        assert_eq!(
            emit_dimacs(&cnf, &reg),
            "c map X 1 2\n\
             c map X' 3 4\n\
             c map w1 5 6\n\
             p cnf 6 11\n\
             -1 -2 0\n\
             -2 0\n\
             -3 -4 0\n\
             -4 0\n\
             -5 -6 0\n\
             -5 0\n\
             -6 0\n\
             -1 5 0\n\
             1 -5 0\n\
             -2 6 0\n\
             2 -6 0\n"
        );
    }

    #[test]
    fn empty_formula_emits_an_empty_problem() {
        let flat = FlatFormula { species: vec![], existentials: vec![], atoms: vec![] };
        let (cnf, reg) = encode(&flat);
        assert_eq!(emit_dimacs(&cnf, &reg), "p cnf 0 0\n");
    }

    #[test]
    fn aux_variables_extend_the_space_without_pairs() {
        let flat = FlatFormula { species: vec!["X".into()], existentials: vec![], atoms: vec![] };
        let (cnf, mut reg) = encode(&flat);
        assert_eq!(cnf.num_vars, 4);
        let flag = reg.fresh_aux("flag");
        assert_eq!(flag, 5);
        assert_eq!(reg.num_vars(), 5);
        assert_eq!(reg.aux(), &[("flag".to_string(), 5)]);
        assert_eq!(reg.len(), 2);
    }
}
