//! Symbolic fermionic operators: linear combinations of products of creation
//! and annihilation operators.
//!
//! # Text form
//!
//! One term per line:
//!
//! ```text
//! <coeff> * <op> <op> ...
//! ```
//!
//! `<coeff>` is either a real number (`-0.5`, `1e-3`) or a complex pair
//! `(re,im)`. Each `<op>` is `a+_<orbital>(<spin>)` for a creation operator or
//! `a_<orbital>(<spin>)` for an annihilation operator, with `<spin>` one of
//! `alpha`, `beta`, `a`, `b`. A term with no operators is a multiple of the
//! identity (`0.75 *` or just `0.75`). Blank lines and lines starting with `#`
//! are ignored. Operators are applied right to left.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::str::FromStr;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::sector::{low_mask, rank_unchecked, strings, Spin};
use crate::state::StateVector;

/// A single creation or annihilation operator on spin orbital `(orb, spin)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct LadderOp {
    pub create: bool,
    pub spin: Spin,
    pub orb: usize,
}

impl LadderOp {
    /// Composite mode key: every beta mode orders above every alpha mode.
    fn mode(&self) -> (Spin, usize) {
        (self.spin, self.orb)
    }

    pub fn adjoint(self) -> Self {
        Self {
            create: !self.create,
            ..self
        }
    }
}

pub fn cre_a(orb: usize) -> LadderOp {
    LadderOp { create: true, spin: Spin::Alpha, orb }
}

pub fn des_a(orb: usize) -> LadderOp {
    LadderOp { create: false, spin: Spin::Alpha, orb }
}

pub fn cre_b(orb: usize) -> LadderOp {
    LadderOp { create: true, spin: Spin::Beta, orb }
}

pub fn des_b(orb: usize) -> LadderOp {
    LadderOp { create: false, spin: Spin::Beta, orb }
}

pub fn cre(spin: Spin, orb: usize) -> LadderOp {
    LadderOp { create: true, spin, orb }
}

pub fn des(spin: Spin, orb: usize) -> LadderOp {
    LadderOp { create: false, spin, orb }
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct FermionOperator {
    terms: BTreeMap<Vec<LadderOp>, Complex64>,
}

impl FermionOperator {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn identity() -> Self {
        Self::from_term(Vec::new(), Complex64::new(1.0, 0.0))
    }

    pub fn from_term(ops: Vec<LadderOp>, coeff: Complex64) -> Self {
        let mut op = Self::new();
        op.add_term(ops, coeff);
        op
    }

    /// Adds `coeff` to the coefficient of `ops`.
    pub fn add_term(&mut self, ops: Vec<LadderOp>, coeff: Complex64) {
        *self.terms.entry(ops).or_default() += coeff;
    }

    pub fn terms(&self) -> impl Iterator<Item = (&[LadderOp], Complex64)> {
        self.terms.iter().map(|(k, &v)| (k.as_slice(), v))
    }

    pub fn coeff(&self, ops: &[LadderOp]) -> Complex64 {
        self.terms.get(ops).copied().unwrap_or_default()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn scale(&self, factor: Complex64) -> Self {
        Self {
            terms: self.terms.iter().map(|(k, &v)| (k.clone(), v * factor)).collect(),
        }
    }

    /// Drops terms whose coefficient magnitude is at most `tol`.
    pub fn prune(&mut self, tol: f64) {
        self.terms.retain(|_, v| v.norm() > tol);
    }

    pub fn adjoint(&self) -> Self {
        let mut out = Self::new();
        for (ops, &c) in &self.terms {
            let adj = ops.iter().rev().map(|o| o.adjoint()).collect();
            out.add_term(adj, c.conj());
        }
        out
    }

    /// Largest orbital index used, plus one.
    pub fn norb_hint(&self) -> usize {
        self.terms
            .keys()
            .flatten()
            .map(|o| o.orb + 1)
            .max()
            .unwrap_or(0)
    }

    /// Whether every term has as many creations as annihilations in each spin.
    pub fn conserves_particle_number_and_spin(&self) -> bool {
        self.terms.keys().all(|ops| term_conserves(ops))
    }

    /// Normal-ordered form: creations left of annihilations, each block
    /// sorted by descending mode (beta above alpha, then orbital index).
    pub fn normal_ordered(&self) -> Self {
        let mut out = BTreeMap::new();
        for (ops, &c) in &self.terms {
            normal_order_term(ops.clone(), c, &mut out);
        }
        out.retain(|_, v: &mut Complex64| *v != Complex64::new(0.0, 0.0));
        Self { terms: out }
    }
}

/// Normal-orders an operator.
pub fn normal_order(op: &FermionOperator) -> FermionOperator {
    op.normal_ordered()
}

fn term_conserves(ops: &[LadderOp]) -> bool {
    let mut balance = [0i64; 2];
    for o in ops {
        let k = (o.spin == Spin::Beta) as usize;
        balance[k] += if o.create { 1 } else { -1 };
    }
    balance == [0, 0]
}

fn normal_order_term(mut ops: Vec<LadderOp>, mut coeff: Complex64, out: &mut BTreeMap<Vec<LadderOp>, Complex64>) {
    for i in 1..ops.len() {
        for j in (1..=i).rev() {
            let right = ops[j];
            let left = ops[j - 1];
            if right.create && !left.create {
                ops.swap(j - 1, j);
                if right.mode() == left.mode() {
                    // a_m a+_m = 1 - a+_m a_m
                    let mut contracted = ops[..j - 1].to_vec();
                    contracted.extend_from_slice(&ops[j + 1..]);
                    normal_order_term(contracted, coeff, out);
                }
                coeff = -coeff;
            } else if right.create == left.create {
                if right.mode() == left.mode() {
                    return;
                }
                if right.mode() > left.mode() {
                    ops.swap(j - 1, j);
                    coeff = -coeff;
                }
            }
        }
    }
    *out.entry(ops).or_default() += coeff;
}

impl Add for &FermionOperator {
    type Output = FermionOperator;

    fn add(self, rhs: &FermionOperator) -> FermionOperator {
        let mut out = self.clone();
        for (k, &v) in &rhs.terms {
            out.add_term(k.clone(), v);
        }
        out
    }
}

impl Sub for &FermionOperator {
    type Output = FermionOperator;

    fn sub(self, rhs: &FermionOperator) -> FermionOperator {
        self + &(-rhs)
    }
}

impl Neg for &FermionOperator {
    type Output = FermionOperator;

    fn neg(self) -> FermionOperator {
        self.scale(Complex64::new(-1.0, 0.0))
    }
}

impl Mul for &FermionOperator {
    type Output = FermionOperator;

    fn mul(self, rhs: &FermionOperator) -> FermionOperator {
        let mut out = FermionOperator::new();
        for (a, &ca) in &self.terms {
            for (b, &cb) in &rhs.terms {
                let mut ops = a.clone();
                ops.extend_from_slice(b);
                out.add_term(ops, ca * cb);
            }
        }
        out
    }
}

impl Mul<&FermionOperator> for Complex64 {
    type Output = FermionOperator;

    fn mul(self, rhs: &FermionOperator) -> FermionOperator {
        rhs.scale(self)
    }
}

fn format_term(ops: &[LadderOp]) -> String {
    ops.iter()
        .map(|o| {
            format!(
                "{}_{}({})",
                if o.create { "a+" } else { "a" },
                o.orb,
                match o.spin {
                    Spin::Alpha => "alpha",
                    Spin::Beta => "beta",
                }
            )
        })
        .collect::<Vec<_>>()
        .join(" ")
}

impl fmt::Display for FermionOperator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (ops, c) in &self.terms {
            writeln!(f, "({:e},{:e}) * {}", c.re, c.im, format_term(ops))?;
        }
        Ok(())
    }
}

fn parse_ladder(tok: &str, line: usize) -> Result<LadderOp> {
    let err = |m: &str| Error::Parse {
        line,
        message: format!("{m}: `{tok}`"),
    };
    let (create, rest) = if let Some(r) = tok.strip_prefix("a+_") {
        (true, r)
    } else if let Some(r) = tok.strip_prefix("a_") {
        (false, r)
    } else {
        return Err(err("expected `a+_p(spin)` or `a_p(spin)`"));
    };
    let open = rest.find('(').ok_or_else(|| err("missing spin"))?;
    let orb = rest[..open]
        .parse::<usize>()
        .map_err(|_| err("bad orbital index"))?;
    let spin = match rest[open..].trim_end() {
        "(alpha)" | "(a)" => Spin::Alpha,
        "(beta)" | "(b)" => Spin::Beta,
        _ => return Err(err("unknown spin")),
    };
    Ok(LadderOp { create, spin, orb })
}

fn parse_coeff(s: &str, line: usize) -> Result<Complex64> {
    let s = s.trim();
    let err = || Error::Parse {
        line,
        message: format!("bad coefficient `{s}`"),
    };
    if let Some(inner) = s.strip_prefix('(').and_then(|r| r.strip_suffix(')')) {
        let (re, im) = inner.split_once(',').ok_or_else(err)?;
        let re = re.trim().parse::<f64>().map_err(|_| err())?;
        let im = im.trim().parse::<f64>().map_err(|_| err())?;
        Ok(Complex64::new(re, im))
    } else {
        s.parse::<f64>().map(|x| Complex64::new(x, 0.0)).map_err(|_| err())
    }
}

impl FromStr for FermionOperator {
    type Err = Error;

    fn from_str(text: &str) -> Result<Self> {
        let mut op = FermionOperator::new();
        for (idx, raw) in text.lines().enumerate() {
            let line = idx + 1;
            let l = raw.trim();
            if l.is_empty() || l.starts_with('#') {
                continue;
            }
            let (coeff, ops) = match l.split_once('*') {
                Some((c, o)) => (c, o),
                None => (l, ""),
            };
            let coeff = parse_coeff(coeff, line)?;
            let ops = ops
                .split_whitespace()
                .map(|t| parse_ladder(t, line))
                .collect::<Result<Vec<_>>>()?;
            op.add_term(ops, coeff);
        }
        Ok(op)
    }
}

/// Applies a particle-number and spin conserving operator to a state vector.
pub fn apply_fermion_operator(op: &FermionOperator, vec: &StateVector) -> Result<StateVector> {
    let shape = vec.shape();
    let n = shape.norb;
    for ops in op.terms.keys() {
        if !term_conserves(ops) {
            return Err(Error::SectorViolation {
                term: format_term(ops),
            });
        }
        if let Some(o) = ops.iter().find(|o| o.orb >= n) {
            return Err(Error::ShapeMismatch(format!(
                "term {} uses orbital {} but the sector has {n} orbitals",
                format_term(ops),
                o.orb
            )));
        }
    }
    let sa = strings(n, shape.nalpha);
    let sb = strings(n, shape.nbeta);
    let db = sb.len();
    let amps = vec.amplitudes();
    let mut out = StateVector::zeros(shape)?;
    let result = out.amplitudes_mut();
    for (ops, &coeff) in &op.terms {
        for (ia, &a0) in sa.iter().enumerate() {
            'config: for (ib, &b0) in sb.iter().enumerate() {
                let amp = amps[ia * db + ib];
                if amp == Complex64::new(0.0, 0.0) {
                    continue;
                }
                let (mut a, mut b) = (a0, b0);
                let mut parity = 0u32;
                for o in ops.iter().rev() {
                    let bit = 1u64 << o.orb;
                    let above = !low_mask(o.orb + 1);
                    let (mask, extra) = match o.spin {
                        Spin::Alpha => (&mut a, b.count_ones()),
                        Spin::Beta => (&mut b, 0),
                    };
                    let occupied = *mask & bit != 0;
                    if occupied == o.create {
                        continue 'config;
                    }
                    parity += (*mask & above).count_ones() + extra;
                    *mask ^= bit;
                }
                let target = rank_unchecked(a) * db + rank_unchecked(b);
                let sign = if parity & 1 == 1 { -1.0 } else { 1.0 };
                result[target] += coeff * sign * amp;
            }
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sector::{OccupationString, SectorShape};

    fn c(x: f64) -> Complex64 {
        Complex64::new(x, 0.0)
    }

    #[test]
    fn anticommutator_same_mode() {
        let op = FermionOperator::from_term(vec![des_a(0), cre_a(0)], c(1.0));
        let no = op.normal_ordered();
        assert_eq!(no.len(), 2);
        assert_eq!(no.coeff(&[]), c(1.0));
        assert_eq!(no.coeff(&[cre_a(0), des_a(0)]), c(-1.0));
    }

    #[test]
    fn anticommutator_distinct_modes() {
        let op = FermionOperator::from_term(vec![des_a(0), cre_a(1)], c(1.0));
        let no = op.normal_ordered();
        assert_eq!(no.len(), 1);
        assert_eq!(no.coeff(&[cre_a(1), des_a(0)]), c(-1.0));
    }

    #[test]
    fn repeated_operators_vanish() {
        let op = FermionOperator::from_term(vec![cre_b(2), cre_a(1), cre_b(2)], c(3.0));
        assert!(op.normal_ordered().is_empty());
    }

    #[test]
    fn ordering_is_descending_with_beta_high() {
        let op = FermionOperator::from_term(vec![des_b(0), cre_a(3), des_a(1), cre_b(1)], c(1.0));
        let no = op.normal_ordered();
        for (ops, _) in no.terms() {
            let creations: Vec<_> = ops.iter().take_while(|o| o.create).collect();
            assert!(ops[creations.len()..].iter().all(|o| !o.create));
            for w in ops.windows(2) {
                if w[0].create == w[1].create {
                    assert!(w[0].mode() > w[1].mode());
                }
            }
        }
        assert_eq!(no.normal_ordered(), no);
    }

    #[test]
    fn text_round_trip() {
        let mut op = FermionOperator::new();
        op.add_term(vec![cre_a(0), des_b(3)], Complex64::new(0.5, -0.25));
        op.add_term(vec![], c(1.5));
        op.add_term(vec![cre_b(1), cre_a(2), des_a(2), des_b(1)], c(-1e-3));
        let text = op.to_string();
        assert_eq!(text.parse::<FermionOperator>().unwrap(), op);
        let parsed: FermionOperator = "# comment\n2.0 * a+_1(a) a_0(b)\n-1\n".parse().unwrap();
        assert_eq!(parsed.coeff(&[cre_a(1), des_b(0)]), c(2.0));
        assert_eq!(parsed.coeff(&[]), c(-1.0));
        assert!("1.0 * b_0(alpha)".parse::<FermionOperator>().is_err());
        assert!(matches!(
            "1.0 * a_0(alpha)\nx * a_0(beta)".parse::<FermionOperator>(),
            Err(Error::Parse { line: 2, .. })
        ));
    }

    #[test]
    fn apply_identity_and_number_operator() {
        let shape = SectorShape::new(3, 2, 1).unwrap();
        let v = StateVector::random(shape, 4).unwrap();
        let out = apply_fermion_operator(&FermionOperator::identity(), &v).unwrap();
        assert_eq!(out, v);
        let cfg = StateVector::configuration(shape, OccupationString(0b101), OccupationString(0b010)).unwrap();
        let n1a = FermionOperator::from_term(vec![cre_a(1), des_a(1)], c(1.0));
        assert_eq!(apply_fermion_operator(&n1a, &cfg).unwrap().norm(), 0.0);
        let n2a = FermionOperator::from_term(vec![cre_a(2), des_a(2)], c(1.0));
        assert_eq!(apply_fermion_operator(&n2a, &cfg).unwrap(), cfg);
    }

    #[test]
    fn apply_rejects_non_conserving_terms() {
        let shape = SectorShape::new(2, 1, 1).unwrap();
        let v = StateVector::hartree_fock(shape).unwrap();
        let op = FermionOperator::from_term(vec![cre_a(1), des_b(0)], c(1.0));
        match apply_fermion_operator(&op, &v) {
            Err(Error::SectorViolation { term }) => assert_eq!(term, "a+_1(alpha) a_0(beta)"),
            other => panic!("unexpected {other:?}"),
        }
    }
}
