//! Canonical form.
//!
//! An expression is expanded into a sum of monomials with exact rational
//! coefficients. A monomial is a product of atoms raised to rational
//! exponents, where an atom is a symbol, a builtin application, a positive
//! rational base (for irrational powers such as `2^(1/2)`), or a compound base
//! (a sum, say) whose exponent is negative or fractional. Positive integer
//! powers of compound bases are always expanded.
//!
//! Compound bases with negative exponents are then brought over a common
//! denominator and cancelled against the numerator by exact polynomial
//! division, so rational-function identities reduce to literal zero.

use std::cmp::Ordering;
use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use super::expr::{Expr, Func, Node};

type Q = BigRational;

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub(crate) struct Monomial(Vec<(Expr, Q)>);

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub(crate) struct Poly(BTreeMap<Monomial, Q>);

#[derive(Clone, Copy, PartialEq, Eq)]
enum AtomClass {
    /// Symbols and builtin applications; any exponent.
    Variable,
    /// Positive rational base with fractional exponent.
    PositiveNumber,
    /// Everything else; expanded at positive integer exponents.
    Compound,
}

fn classify(atom: &Expr) -> AtomClass {
    match atom.node() {
        Node::Sym(_) | Node::Apply(..) => AtomClass::Variable,
        Node::Number(q) if q.is_positive() => AtomClass::PositiveNumber,
        _ => AtomClass::Compound,
    }
}

fn is_integer(q: &Q) -> bool {
    q.is_integer()
}

fn qint(n: i64) -> Q {
    Q::from_integer(BigInt::from(n))
}

fn pow_rational(base: &Q, exp: &BigInt) -> Q {
    let e = exp.to_i32().expect("exponent too large");
    if e >= 0 {
        num_traits::pow(base.clone(), e as usize)
    } else {
        num_traits::pow(base.recip(), (-e) as usize)
    }
}

/// `c^(1/q)` when it is rational, for positive `c`.
fn rational_root(c: &Q, q: &BigInt) -> Option<Q> {
    let q = q.to_u32()?;
    let root = |n: &BigInt| -> Option<BigInt> {
        let r = n.nth_root(q);
        if num_traits::pow(r.clone(), q as usize) == *n {
            Some(r)
        } else {
            None
        }
    };
    Some(Q::new(root(c.numer())?, root(c.denom())?))
}

fn degree(m: &Monomial) -> Q {
    m.0.iter().fold(Q::zero(), |acc, (_, e)| acc + e)
}

/// Graded order, ties broken lexicographically with smaller atoms weighing more.
pub(crate) fn graded_cmp(a: &Monomial, b: &Monomial) -> Ordering {
    match degree(a).cmp(&degree(b)) {
        Ordering::Equal => {}
        o => return o,
    }
    let (mut i, mut j) = (0, 0);
    let zero = Q::zero();
    loop {
        let (ea, eb) = match (a.0.get(i), b.0.get(j)) {
            (None, None) => return Ordering::Equal,
            (Some((_, ea)), None) => {
                i += 1;
                (ea, &zero)
            }
            (None, Some((_, eb))) => {
                j += 1;
                (&zero, eb)
            }
            (Some((xa, ea)), Some((xb, eb))) => match xa.cmp(xb) {
                Ordering::Equal => {
                    i += 1;
                    j += 1;
                    (ea, eb)
                }
                Ordering::Less => {
                    i += 1;
                    (ea, &zero)
                }
                Ordering::Greater => {
                    j += 1;
                    (&zero, eb)
                }
            },
        };
        match ea.cmp(eb) {
            Ordering::Equal => continue,
            o => return o,
        }
    }
}

impl Monomial {
    fn one() -> Self {
        Monomial(Vec::new())
    }

    fn atom(a: Expr, e: Q) -> Self {
        Monomial(vec![(a, e)])
    }

    pub(crate) fn exponent_of(&self, atom: &Expr) -> Q {
        self.0
            .iter()
            .find(|(a, _)| a == atom)
            .map(|(_, e)| e.clone())
            .unwrap_or_else(Q::zero)
    }

    fn without(&self, atom: &Expr) -> Monomial {
        Monomial(self.0.iter().filter(|(a, _)| a != atom).cloned().collect())
    }

    /// Exponent-wise sum without any normalization.
    fn raw_mul(&self, other: &Monomial) -> Monomial {
        let mut out = Vec::with_capacity(self.0.len() + other.0.len());
        let (mut i, mut j) = (0, 0);
        while i < self.0.len() || j < other.0.len() {
            match (self.0.get(i), other.0.get(j)) {
                (Some(a), None) => {
                    out.push(a.clone());
                    i += 1;
                }
                (None, Some(b)) => {
                    out.push(b.clone());
                    j += 1;
                }
                (Some((xa, ea)), Some((xb, eb))) => match xa.cmp(xb) {
                    Ordering::Less => {
                        out.push((xa.clone(), ea.clone()));
                        i += 1;
                    }
                    Ordering::Greater => {
                        out.push((xb.clone(), eb.clone()));
                        j += 1;
                    }
                    Ordering::Equal => {
                        let e = ea + eb;
                        if !e.is_zero() {
                            out.push((xa.clone(), e));
                        }
                        i += 1;
                        j += 1;
                    }
                },
                (None, None) => unreachable!(),
            }
        }
        Monomial(out)
    }

    fn inverse(&self) -> Monomial {
        Monomial(self.0.iter().map(|(a, e)| (a.clone(), -e.clone())).collect())
    }

    fn divides(&self, other: &Monomial) -> bool {
        self.0.iter().all(|(a, e)| other.exponent_of(a) >= *e)
    }
}

impl Poly {
    fn zero() -> Self {
        Poly(BTreeMap::new())
    }

    fn constant(c: Q) -> Self {
        Poly::term(c, Monomial::one())
    }

    fn term(c: Q, m: Monomial) -> Self {
        let mut p = Poly::zero();
        if !c.is_zero() {
            p.0.insert(m, c);
        }
        p
    }

    fn atom(a: Expr, e: Q) -> Self {
        Poly::term(Q::one(), Monomial::atom(a, e))
    }

    pub(crate) fn is_zero(&self) -> bool {
        self.0.is_empty()
    }

    fn add_term(&mut self, c: Q, m: Monomial) {
        if c.is_zero() {
            return;
        }
        match self.0.get_mut(&m) {
            Some(v) => {
                *v += c;
                if v.is_zero() {
                    self.0.remove(&m);
                }
            }
            None => {
                self.0.insert(m, c);
            }
        }
    }

    fn add_poly(&mut self, other: Poly) {
        for (m, c) in other.0 {
            self.add_term(c, m);
        }
    }

    fn scale(mut self, c: &Q) -> Poly {
        if c.is_zero() {
            return Poly::zero();
        }
        for v in self.0.values_mut() {
            *v *= c;
        }
        self
    }

    fn single(&self) -> Option<(&Monomial, &Q)> {
        if self.0.len() == 1 {
            self.0.iter().next()
        } else {
            None
        }
    }

    fn leading(&self) -> Option<(&Monomial, &Q)> {
        self.0.iter().max_by(|a, b| graded_cmp(a.0, b.0))
    }

    /// Normalizing product.
    fn mul(&self, other: &Poly) -> Poly {
        let mut out = Poly::zero();
        for (m1, c1) in &self.0 {
            for (m2, c2) in &other.0 {
                out.add_poly(mul_terms(c1 * c2, m1.raw_mul(m2)));
            }
        }
        out
    }

    fn powu(&self, mut n: u64) -> Poly {
        let mut base = self.clone();
        let mut acc = Poly::constant(Q::one());
        while n > 0 {
            if n & 1 == 1 {
                acc = acc.mul(&base);
            }
            n >>= 1;
            if n > 0 {
                base = base.mul(&base);
            }
        }
        acc
    }

    fn raw_mul_term(&self, c: &Q, m: &Monomial) -> Poly {
        let mut out = Poly::zero();
        for (m1, c1) in &self.0 {
            out.add_term(c1 * c, m1.raw_mul(m));
        }
        out
    }
}

/// Normalizes a single raw monomial: drops zero exponents, folds integer
/// powers of numbers into the coefficient and expands positive integer powers
/// of compound bases.
fn mul_terms(mut coef: Q, m: Monomial) -> Poly {
    let mut atoms = Vec::with_capacity(m.0.len());
    let mut expand: Vec<(Expr, u64)> = Vec::new();
    for (a, e) in m.0 {
        if e.is_zero() {
            continue;
        }
        match classify(&a) {
            AtomClass::Variable => atoms.push((a, e)),
            AtomClass::PositiveNumber => {
                let base = a.as_number().unwrap().clone();
                let whole = e.floor();
                coef *= pow_rational(&base, &whole.to_integer());
                let frac = e - whole;
                if frac.is_zero() {
                    continue;
                }
                match rational_root(&base, frac.denom()) {
                    Some(r) => coef *= pow_rational(&r, frac.numer()),
                    None => atoms.push((a, frac)),
                }
            }
            AtomClass::Compound => {
                if is_integer(&e) && e.is_positive() {
                    expand.push((a, e.to_integer().to_u64().expect("exponent too large")));
                } else {
                    atoms.push((a, e));
                }
            }
        }
    }
    let mut out = Poly::term(coef, Monomial(atoms));
    for (a, k) in expand {
        out = out.mul(&to_poly(&a).powu(k));
    }
    out
}

fn numerator_is_even(q: &Q) -> bool {
    q.numer().is_even()
}

fn poly_to_atom(p: &Poly, e: Q) -> Poly {
    Poly::atom(to_expr(p), e)
}

/// `p^k` for `k` not a non-negative integer.
fn power_general(p: Poly, k: Q) -> Poly {
    if p.is_zero() {
        return if k.is_positive() {
            Poly::zero()
        } else {
            Poly::atom(Expr::zero(), k)
        };
    }
    let k_int = is_integer(&k);
    if let Some((m, c)) = p.single() {
        if !k_int && (c.is_negative() || m.0.iter().any(|(_, e)| numerator_is_even(e))) {
            return poly_to_atom(&p, k);
        }
        let scaled = Monomial(m.0.iter().map(|(a, e)| (a.clone(), e * &k)).collect());
        let coef_part = if k_int {
            Poly::constant(pow_rational(c, &k.to_integer()))
        } else {
            mul_terms(Q::one(), Monomial::atom(Expr::number(c.clone()), k.clone()))
        };
        return coef_part.mul(&mul_terms(Q::one(), scaled));
    }
    if k_int && k < qint(-1) {
        // `(x + 1)^-2` and `1/(x + 1)^2` must meet in one form
        let n = (-&k).to_integer().to_u64().expect("exponent too large");
        return power_general(p.powu(n), qint(-1));
    }
    let lead_c = p.leading().map(|(_, c)| c.clone()).unwrap();
    if k_int {
        // pull out the leading coefficient and the common monomial factor
        let common = common_variable_factor(&p);
        let inv = common.inverse();
        let base = p.raw_mul_term(&lead_c.recip(), &inv);
        let mut out = Poly::constant(pow_rational(&lead_c, &k.to_integer()));
        let scaled = Monomial(common.0.iter().map(|(a, e)| (a.clone(), e * &k)).collect());
        out = out.mul(&mul_terms(Q::one(), scaled));
        out.mul(&poly_to_atom(&base, k))
    } else if lead_c.is_positive() {
        let base = p.scale(&lead_c.recip());
        let c_part = mul_terms(Q::one(), Monomial::atom(Expr::number(lead_c), k.clone()));
        c_part.mul(&poly_to_atom(&base, k))
    } else {
        poly_to_atom(&p, k)
    }
}

/// Largest monomial in variable atoms dividing every term.
fn common_variable_factor(p: &Poly) -> Monomial {
    let mut iter = p.0.keys();
    let first = match iter.next() {
        Some(m) => m,
        None => return Monomial::one(),
    };
    let mut common: Vec<(Expr, Q)> = first
        .0
        .iter()
        .filter(|(a, _)| classify(a) == AtomClass::Variable)
        .cloned()
        .collect();
    for m in iter {
        common = common
            .into_iter()
            .filter_map(|(a, e)| {
                let other = m.exponent_of(&a);
                if other.is_zero() {
                    None
                } else {
                    Some((a, e.min(other)))
                }
            })
            .collect();
    }
    // only strip when every term carries the atom; a negative minimum still counts
    Monomial(common)
}

fn leading_coefficient_negative(p: &Poly) -> bool {
    p.leading().is_some_and(|(_, c)| c.is_negative())
}

fn apply_func(f: Func, arg: Poly) -> Poly {
    let a = to_expr(&arg);
    match f {
        Func::Sin | Func::Cos if arg.is_zero() => {
            if f == Func::Sin {
                Poly::zero()
            } else {
                Poly::constant(Q::one())
            }
        }
        Func::Sin if leading_coefficient_negative(&arg) => {
            let neg = to_expr(&arg.scale(&qint(-1)));
            Poly::term(qint(-1), Monomial::atom(Expr::apply(Func::Sin, neg), Q::one()))
        }
        Func::Cos if leading_coefficient_negative(&arg) => {
            let neg = to_expr(&arg.scale(&qint(-1)));
            Poly::atom(Expr::apply(Func::Cos, neg), Q::one())
        }
        Func::Exp if arg.is_zero() => Poly::constant(Q::one()),
        Func::Ln if a.is_literal_one() => Poly::zero(),
        Func::Exp => match a.node() {
            Node::Apply(Func::Ln, inner) => to_poly(inner),
            _ => Poly::atom(Expr::apply(f, a), Q::one()),
        },
        Func::Ln => match a.node() {
            Node::Apply(Func::Exp, inner) => to_poly(inner),
            _ => Poly::atom(Expr::apply(f, a), Q::one()),
        },
        _ => Poly::atom(Expr::apply(f, a), Q::one()),
    }
}

pub(crate) fn to_poly(e: &Expr) -> Poly {
    match e.node() {
        Node::Number(q) => Poly::constant(q.clone()),
        Node::Sym(_) => Poly::atom(e.clone(), Q::one()),
        Node::Sum(terms) => {
            let mut out = Poly::zero();
            for t in terms {
                out.add_poly(to_poly(t));
            }
            out
        }
        Node::Product(factors) => {
            let mut out = Poly::constant(Q::one());
            for f in factors {
                out = out.mul(&to_poly(f));
                if out.is_zero() {
                    break;
                }
            }
            out
        }
        Node::Power(b, k) => {
            if is_integer(k) && !k.is_negative() {
                to_poly(b).powu(k.to_integer().to_u64().expect("exponent too large"))
            } else {
                power_general(to_poly(b), k.clone())
            }
        }
        Node::Apply(f, a) => apply_func(*f, to_poly(a)),
    }
}

fn monomial_to_expr(c: &Q, m: &Monomial) -> Expr {
    let mut factors = Vec::with_capacity(m.0.len() + 1);
    if !c.is_one() || m.0.is_empty() {
        factors.push(Expr::number(c.clone()));
    }
    for (a, e) in &m.0 {
        if e.is_one() {
            factors.push(a.clone());
        } else {
            factors.push(a.pow(e.clone()));
        }
    }
    Expr::product(factors)
}

pub(crate) fn to_expr(p: &Poly) -> Expr {
    let mut terms: Vec<(&Monomial, &Q)> = p.0.iter().collect();
    terms.sort_by(|a, b| graded_cmp(b.0, a.0));
    Expr::sum(terms.into_iter().map(|(m, c)| monomial_to_expr(c, m)).collect())
}

/// Exact division in the polynomial ring generated by the atoms.
fn exact_div(n: &Poly, b: &Poly) -> Option<Poly> {
    let shift = |p: &Poly| -> Monomial {
        let mut mins: BTreeMap<Expr, Q> = BTreeMap::new();
        for m in p.0.keys() {
            for (a, e) in &m.0 {
                let entry = mins.entry(a.clone()).or_insert_with(Q::zero);
                if *e < *entry {
                    *entry = e.clone();
                }
            }
        }
        Monomial(mins.into_iter().filter(|(_, e)| e.is_negative()).map(|(a, e)| (a, -e)).collect())
    };
    let sn = shift(n);
    let sb = shift(b);
    let n2 = n.raw_mul_term(&Q::one(), &sn);
    let b2 = b.raw_mul_term(&Q::one(), &sb);
    let (lb_m, lb_c) = b2.leading().map(|(m, c)| (m.clone(), c.clone()))?;
    let mut r = n2;
    let mut q = Poly::zero();
    let mut steps = 0usize;
    while let Some((lm, lc)) = r.leading().map(|(m, c)| (m.clone(), c.clone())) {
        steps += 1;
        if steps > 20_000 || !lb_m.divides(&lm) {
            return None;
        }
        let tm = lm.raw_mul(&lb_m.inverse());
        let tc = lc / &lb_c;
        q.add_term(tc.clone(), tm.clone());
        let sub = b2.raw_mul_term(&-tc, &tm);
        r.add_poly(sub);
    }
    // undo the shifts: n = b * q * sb / sn
    let back = sb.raw_mul(&sn.inverse());
    let mut out = Poly::zero();
    for (m, c) in &q.0 {
        out.add_poly(mul_terms(c.clone(), m.raw_mul(&back)));
    }
    Some(out)
}

fn normalize_denominators(mut p: Poly) -> Poly {
    let mut bases: Vec<Expr> = p
        .0
        .keys()
        .flat_map(|m| m.0.iter())
        .filter(|(a, e)| e.is_negative() && matches!(a.node(), Node::Sum(_)))
        .map(|(a, _)| a.clone())
        .collect();
    bases.sort();
    bases.dedup();
    for base in bases {
        let exps: Vec<Q> = p.0.keys().map(|m| m.exponent_of(&base)).collect();
        let Some(e0) = exps.first().cloned() else { break };
        if exps.iter().any(|e| !is_integer(&(e - &e0))) {
            continue;
        }
        let mut emin = exps.iter().min().cloned().unwrap();
        if !emin.is_negative() {
            continue;
        }
        let bpoly = to_poly(&base);
        let mut numer = Poly::zero();
        for (m, c) in &p.0 {
            let k = (m.exponent_of(&base) - &emin).to_integer().to_u64().expect("exponent too large");
            let rest = mul_terms(c.clone(), m.without(&base));
            numer.add_poly(rest.mul(&bpoly.powu(k)));
        }
        if numer.is_zero() {
            return Poly::zero();
        }
        while emin.is_negative() {
            match exact_div(&numer, &bpoly) {
                Some(q) => {
                    numer = q;
                    emin += Q::one();
                }
                None => break,
            }
        }
        p = if emin.is_zero() {
            numer
        } else {
            numer.mul(&Poly::atom(base.clone(), emin))
        };
    }
    p
}

fn simplify_once(e: &Expr) -> Expr {
    to_expr(&normalize_denominators(to_poly(e)))
}

/// Canonical form. Idempotent: `simplify(&simplify(e)) == simplify(e)`.
pub fn simplify(e: &Expr) -> Expr {
    let mut cur = simplify_once(e);
    for _ in 0..6 {
        let next = simplify_once(&cur);
        if next == cur {
            break;
        }
        cur = next;
    }
    cur
}

/// Symbolic zero test: simplifies to the literal `0`.
pub fn is_zero(e: &Expr) -> bool {
    simplify(e).is_literal_zero()
}

/// `a` and `b` simplify to the same canonical form.
pub fn equivalent(a: &Expr, b: &Expr) -> bool {
    is_zero(&(a - b))
}

/// Coefficient of `atom^k` when `e` is viewed as a polynomial in `atom`; used
/// to split expressions that are affine in a jet coordinate.
pub fn coefficient(e: &Expr, atom: &Expr, k: i64) -> Expr {
    let p = to_poly(e);
    let want = qint(k);
    let mut out = Poly::zero();
    for (m, c) in &p.0 {
        if m.exponent_of(atom) == want {
            out.add_term(c.clone(), m.without(atom));
        }
    }
    simplify(&to_expr(&out))
}

/// Highest exponent with which `atom` occurs in the expanded form.
pub fn degree_in(e: &Expr, atom: &Expr) -> Option<Q> {
    to_poly(&simplify(e)).0.keys().map(|m| m.exponent_of(atom)).max()
}

impl Expr {
    /// Method form of [`simplify`].
    pub fn simplified(&self) -> Expr {
        simplify(self)
    }
}
