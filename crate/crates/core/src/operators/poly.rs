use super::*;
use crate::sampling::Sampler;
use std::collections::BTreeMap;

pub const MAX_DEGREE: u32 = 12;

/// Sparse complex polynomial in (q1, q2, q3), keyed by exponent triples.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct QPolynomial {
    terms: BTreeMap<[u8; 3], C64>,
}

impl QPolynomial {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn constant(c: C64) -> Self {
        let mut p = Self::zero();
        p.add_term([0, 0, 0], c);
        p
    }

    pub fn monomial(exp: [u8; 3], c: C64) -> Result<Self> {
        let mut p = Self::zero();
        if exp.iter().map(|&e| e as u32).sum::<u32>() > MAX_DEGREE {
            return Err(Error::DegreeOverflow(format!("monomial {exp:?}")));
        }
        p.add_term(exp, c);
        Ok(p)
    }

    /// q_i (i = 0, 1, 2).
    pub fn coordinate(i: usize) -> Self {
        let mut e = [0u8; 3];
        e[i] = 1;
        Self::monomial(e, C64::new(1.0, 0.0)).expect("degree 1")
    }

    fn add_term(&mut self, exp: [u8; 3], c: C64) {
        if c == C64::new(0.0, 0.0) {
            return;
        }
        let entry = self.terms.entry(exp).or_insert(C64::new(0.0, 0.0));
        *entry += c;
        if *entry == C64::new(0.0, 0.0) {
            self.terms.remove(&exp);
        }
    }

    pub fn terms(&self) -> impl Iterator<Item = (&[u8; 3], &C64)> {
        self.terms.iter()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn degree(&self) -> u32 {
        self.terms.keys().map(|e| e.iter().map(|&x| x as u32).sum()).max().unwrap_or(0)
    }

    pub fn max_coefficient(&self) -> f64 {
        self.terms.values().map(|c| c.norm()).fold(0.0, f64::max)
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for (e, c) in &other.terms {
            out.add_term(*e, *c);
        }
        out
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.scale(C64::new(-1.0, 0.0)))
    }

    pub fn scale(&self, s: C64) -> Self {
        let mut out = Self::zero();
        for (e, c) in &self.terms {
            out.add_term(*e, c * s);
        }
        out
    }

    /// Multiply by q_i.
    pub fn mul_coordinate(&self, i: usize) -> Result<Self> {
        if self.degree() + 1 > MAX_DEGREE && !self.is_empty() {
            return Err(Error::DegreeOverflow(format!("degree {} times q{}", self.degree(), i + 1)));
        }
        let mut out = Self::zero();
        for (e, c) in &self.terms {
            let mut e2 = *e;
            e2[i] += 1;
            out.add_term(e2, *c);
        }
        Ok(out)
    }

    /// ∂/∂q_i.
    pub fn partial(&self, i: usize) -> Self {
        let mut out = Self::zero();
        for (e, c) in &self.terms {
            if e[i] > 0 {
                let mut e2 = *e;
                e2[i] -= 1;
                out.add_term(e2, c * e[i] as f64);
            }
        }
        out
    }

    pub fn eval(&self, q: [f64; 3]) -> C64 {
        self.terms
            .iter()
            .map(|(e, c)| c * q[0].powi(e[0] as i32) * q[1].powi(e[1] as i32) * q[2].powi(e[2] as i32))
            .sum()
    }

    /// Random polynomial with up to `n_terms` monomials of total degree
    /// ≤ `degree` and coefficients uniform in the unit square.
    pub fn random(sampler: &mut Sampler, degree: u32, n_terms: usize) -> Result<Self> {
        if degree > MAX_DEGREE {
            return Err(Error::DegreeOverflow(format!("requested degree {degree}")));
        }
        let mut p = Self::zero();
        for _ in 0..n_terms {
            let d = sampler.int(0, degree as i64) as u8;
            let i = sampler.int(0, d as i64) as u8;
            let j = sampler.int(0, (d - i) as i64) as u8;
            let c = C64::new(sampler.uniform(-1.0, 1.0), sampler.uniform(-1.0, 1.0));
            p.add_term([i, j, d - i - j], c);
        }
        Ok(p)
    }
}

/// Exact momentum P_i = −i(∂_i − σ q_i q_j ∂_j) and angular momentum
/// L_a = ε_abc q_b P_c acting on polynomials (σ = +1 on H₃, −1 on S₃).
#[derive(Debug, Clone, Copy)]
pub struct MomentumAlgebra {
    pub space: SpaceTag,
}

const MINUS_I: C64 = C64 { re: 0.0, im: -1.0 };

impl MomentumAlgebra {
    pub fn new(space: SpaceTag) -> Self {
        Self { space }
    }

    /// q · ∇ p (Euler operator).
    fn euler(p: &QPolynomial) -> Result<QPolynomial> {
        let mut out = QPolynomial::zero();
        for j in 0..3 {
            out = out.add(&p.partial(j).mul_coordinate(j)?);
        }
        Ok(out)
    }

    pub fn p(&self, i: usize, f: &QPolynomial) -> Result<QPolynomial> {
        let sigma = self.space.sigma() as f64;
        let radial = Self::euler(f)?.mul_coordinate(i)?;
        Ok(f.partial(i).sub(&radial.scale(C64::new(sigma, 0.0))).scale(MINUS_I))
    }

    /// L_a. The q_b q_c (q·∇) pieces of q × P cancel identically, so the
    /// cross product is applied in its reduced form −i(q_b ∂_c − q_c ∂_b),
    /// which keeps the degree fixed.
    pub fn l(&self, a: usize, f: &QPolynomial) -> Result<QPolynomial> {
        let (b, c) = ((a + 1) % 3, (a + 2) % 3);
        let t = f.partial(c).mul_coordinate(b)?.sub(&f.partial(b).mul_coordinate(c)?);
        Ok(t.scale(MINUS_I))
    }
}

/// Sign s in [P_a, P_b] = s·i ε_abc L_c. The relation that holds for
/// P = −i(∂ ∓ q q·∂) is s = −1 on H₃ and s = +1 on S₃.
pub fn pp_commutator_sign(space: SpaceTag) -> f64 {
    -(space.sigma() as f64)
}

/// Verify the nine commutators [L_a, L_b] = iε L_c, [L_a, P_b] = iε P_c and
/// [P_a, P_b] = s·iε L_c (cyclic (a, b, c)) as exact coefficient identities on `f`.
pub fn momentum_commutators(space: SpaceTag, f: &QPolynomial) -> Result<ResidualReport> {
    momentum_commutators_with_sign(space, f, pp_commutator_sign(space))
}

/// As `momentum_commutators` with an explicit sign for the [P, P] relation.
pub fn momentum_commutators_with_sign(space: SpaceTag, f: &QPolynomial, pp_sign: f64) -> Result<ResidualReport> {
    if f.degree() > MAX_DEGREE - 2 {
        return Err(Error::DegreeOverflow(format!("input degree {} > {}", f.degree(), MAX_DEGREE - 2)));
    }
    let alg = MomentumAlgebra::new(space);
    let i = C64::new(0.0, 1.0);
    let scale = 1.0 + f.max_coefficient();
    let mut acc = Accumulator::new();
    let mut push = |kind: f64, a: usize, diff: QPolynomial| {
        let r = diff.max_coefficient();
        acc.push(&[kind, a as f64], r, r / scale);
    };
    for a in 0..3 {
        let (b, c) = ((a + 1) % 3, (a + 2) % 3);
        let ll = alg.l(a, &alg.l(b, f)?)?.sub(&alg.l(b, &alg.l(a, f)?)?);
        push(0.0, a, ll.sub(&alg.l(c, f)?.scale(i)));
        let lp = alg.l(a, &alg.p(b, f)?)?.sub(&alg.p(b, &alg.l(a, f)?)?);
        push(1.0, a, lp.sub(&alg.p(c, f)?.scale(i)));
        let pp = alg.p(a, &alg.p(b, f)?)?.sub(&alg.p(b, &alg.p(a, f)?)?);
        push(2.0, a, pp.sub(&alg.l(c, f)?.scale(i * pp_sign)));
    }
    Ok(acc.finish(&format!("commutators-{space}"), 1e-12))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn constant_is_annihilated() {
        for space in SpaceTag::ALL {
            let r = momentum_commutators(space, &QPolynomial::constant(C64::new(2.0, -1.0))).unwrap();
            assert_eq!(r.max_abs, 0.0);
            assert!(r.passed);
        }
    }

    #[test]
    fn pp_on_q1_by_hand() {
        // [P1, P2] q1 = s·i L3 q1 with L3 q1 = −i(q1 ∂2 − q2 ∂1) q1 = i q2,
        // so the right side is −s q2.
        for space in SpaceTag::ALL {
            let alg = MomentumAlgebra::new(space);
            let q1 = QPolynomial::coordinate(0);
            let lhs = alg.p(0, &alg.p(1, &q1).unwrap()).unwrap().sub(&alg.p(1, &alg.p(0, &q1).unwrap()).unwrap());
            let want = QPolynomial::coordinate(1).scale(C64::new(-pp_commutator_sign(space), 0.0));
            assert_eq!(lhs.sub(&want).max_coefficient(), 0.0, "{space}: {lhs:?}");
        }
    }

    #[test]
    fn printed_sign_fails() {
        let mut s = Sampler::new(3);
        let f = QPolynomial::random(&mut s, 4, 12).unwrap();
        for space in SpaceTag::ALL {
            let r = momentum_commutators_with_sign(space, &f, -pp_commutator_sign(space)).unwrap();
            assert!(!r.passed);
        }
    }

    #[test]
    fn degree_guard() {
        let f = QPolynomial::monomial([11, 0, 0], C64::new(1.0, 0.0)).unwrap();
        assert!(matches!(momentum_commutators(SpaceTag::H3, &f), Err(Error::DegreeOverflow(_))));
        assert!(QPolynomial::monomial([13, 0, 0], C64::new(1.0, 0.0)).is_err());
    }

    #[test]
    fn no_zero_coefficients_stored() {
        let p = QPolynomial::coordinate(0);
        assert!(p.sub(&p).is_empty());
    }
}
