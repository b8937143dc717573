use super::*;
use crate::geometry::{polar_decompose, ParabolicPoint};
use crate::specfun::{complex_pow, hyp2f1, hyp2f1_derivative};

/// Logarithms ln(1 − t1), ln(1 − t2) used for the (1 − t)^b factors.
///
/// On H₃ both bases are positive and the real logarithm is used. On S₃ the
/// principal logarithm jumps where the physical slice crosses the equator
/// (1 − t1 or 1 − t2 becomes a negative real), so the branch continuous from
/// the origin is taken instead: with w = y0 − i·y3 = cos χ − i cos θ sin χ,
/// ln(1 − t1) = ln|1 − t1| + i(arg w − χ) and ln(1 − t2) = ln|1 − t2| + i(arg w + χ).
pub fn branch_logs(space: SpaceTag, p: &ParabolicPoint) -> Result<(C64, C64)> {
    let one = C64::new(1.0, 0.0);
    let (u1, u2) = (one - p.t1, one - p.t2);
    match space {
        SpaceTag::H3 => Ok((C64::new(u1.re.ln(), 0.0), C64::new(u2.re.ln(), 0.0))),
        SpaceTag::S3 => {
            if u1.norm() == 0.0 || u2.norm() == 0.0 {
                return Err(Error::Domain("t = 1 on the S3 slice".into()));
            }
            let located = polar_decompose(p)?;
            if located.degenerate.is_some() {
                // origin: 1 − t = 1
                return Ok((C64::new(0.0, 0.0), C64::new(0.0, 0.0)));
            }
            let pf = located.value;
            let chi = std::f64::consts::FRAC_PI_2 - pf.alpha;
            let arg_w = (-0.5 * (pf.a - pf.b)).atan2(pf.alpha.sin());
            Ok((C64::new(u1.norm().ln(), arg_w - chi), C64::new(u2.norm().ln(), arg_w + chi)))
        }
    }
}

/// Base handed to t^a: on H₃ the nonpositive t2 is placed on the upper lip
/// of the cut (imaginary part +0), so t2^a = |t2|^a e^{iπa}.
pub fn power_base(space: SpaceTag, t: C64) -> C64 {
    match space {
        SpaceTag::H3 => C64::new(t.re, 0.0),
        SpaceTag::S3 => t,
    }
}

impl SeparatedFactor {
    /// Value with the principal branch of (1 − t)^b.
    pub fn value(&self, t: C64) -> Result<C64> {
        let l = (C64::new(1.0, 0.0) - t).ln();
        self.value_with_log(t, l)
    }

    /// Value with (1 − t)^b = exp(b · ln1m), ln1m a chosen logarithm of 1 − t.
    pub fn value_with_log(&self, t: C64, ln1m: C64) -> Result<C64> {
        Ok(self.jet_with_log(t, ln1m, 0)?[0])
    }

    /// (f, f′, f″) with the principal branch.
    pub fn jet(&self, t: C64) -> Result<[C64; 3]> {
        let l = (C64::new(1.0, 0.0) - t).ln();
        self.jet_with_log(t, l, 2)
    }

    /// f and its derivatives up to `order` (≤ 2), exact product rule on
    /// T = t^a, Q = (1 − t)^b and F.
    pub fn jet_with_log(&self, t: C64, ln1m: C64, order: usize) -> Result<[C64; 3]> {
        let z = C64::new(0.0, 0.0);
        let a = C64::new(self.a, 0.0);
        let b = self.b;
        let pow_t = |coef: C64, shift: f64| -> Result<C64> {
            if coef == z {
                Ok(z)
            } else {
                Ok(coef * complex_pow(t, a - shift)?)
            }
        };
        let one_minus = C64::new(1.0, 0.0) - t;
        let pow_q = |coef: C64, shift: f64| -> Result<C64> {
            if coef == z {
                return Ok(z);
            }
            let ex = b - shift;
            if ex == z {
                return Ok(coef);
            }
            if one_minus == z {
                return if ex.re > 0.0 {
                    Ok(z)
                } else {
                    Err(Error::Domain("(1 - t)^b singular at t = 1".into()))
                };
            }
            Ok(coef * (ex * ln1m).exp())
        };
        let one = C64::new(1.0, 0.0);
        let tt = [pow_t(one, 0.0)?, if order >= 1 { pow_t(a, 1.0)? } else { z }, if order >= 2 { pow_t(a * (a - 1.0), 2.0)? } else { z }];
        let qq = [pow_q(one, 0.0)?, if order >= 1 { pow_q(-b, 1.0)? } else { z }, if order >= 2 { pow_q(b * (b - 1.0), 2.0)? } else { z }];
        let ff = [
            hyp2f1(&self.params, t)?,
            if order >= 1 { hyp2f1_derivative(&self.params, t, 1)? } else { z },
            if order >= 2 { hyp2f1_derivative(&self.params, t, 2)? } else { z },
        ];
        let f0 = tt[0] * qq[0] * ff[0];
        let f1 = tt[1] * qq[0] * ff[0] + tt[0] * qq[1] * ff[0] + tt[0] * qq[0] * ff[1];
        let f2 = tt[2] * qq[0] * ff[0]
            + tt[0] * qq[2] * ff[0]
            + tt[0] * qq[0] * ff[2]
            + 2.0 * (tt[1] * qq[1] * ff[0] + tt[1] * qq[0] * ff[1] + tt[0] * qq[1] * ff[1]);
        Ok([f0, f1, f2])
    }
}

/// Ψ(t1, t2, φ) = f1(t1) f2(t2) e^{imφ}, unnormalized.
pub fn wavefunction(state: &StateParams, p: &ParabolicPoint) -> Result<C64> {
    p.validate(state.space)?;
    let (l1, l2) = branch_logs(state.space, p)?;
    let f1 = factor(state, 1)?.value_with_log(power_base(state.space, p.t1), l1)?;
    let f2 = factor(state, 2)?.value_with_log(power_base(state.space, p.t2), l2)?;
    Ok(f1 * f2 * C64::from_polar(1.0, state.qn.m as f64 * p.phi))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::{spherical_to_parabolic, SphericalPoint};

    #[test]
    fn origin_values() {
        let s = assemble_state(SpaceTag::S3, 2.0, QuantumNumbers::new(1, 0, 0)).unwrap();
        let o = ParabolicPoint::real(0.0, 0.0, 0.0);
        assert_eq!(wavefunction(&s, &o).unwrap(), C64::new(1.0, 0.0));
        let s = assemble_state(SpaceTag::H3, 10.0, QuantumNumbers::new(0, 0, 1)).unwrap();
        assert_eq!(wavefunction(&s, &o).unwrap(), C64::new(0.0, 0.0));
    }

    #[test]
    fn h3_ground_state_direct() {
        // (0,0,0), e = 5: Ψ = (1 − t1)^{e/2}(1 − t2)^{−e/2}
        let s = assemble_state(SpaceTag::H3, 5.0, QuantumNumbers::new(0, 0, 0)).unwrap();
        let p = ParabolicPoint::real(0.3, -0.5, 1.0);
        let want = 0.7f64.powf(2.5) * 1.5f64.powf(-2.5);
        let got = wavefunction(&s, &p).unwrap();
        assert!((got.re - want).abs() < 1e-15 * want && got.im == 0.0);
    }

    #[test]
    fn s3_logs_agree_with_principal_in_the_north() {
        for &(chi, theta) in &[(0.3, 0.4), (1.2, 2.9), (1.5, 1.0)] {
            let sp = SphericalPoint::new(SpaceTag::S3, chi, theta, 0.0).unwrap();
            let p = spherical_to_parabolic(SpaceTag::S3, &sp).unwrap();
            let (l1, l2) = branch_logs(SpaceTag::S3, &p).unwrap();
            let one = C64::new(1.0, 0.0);
            assert!((l1 - (one - p.t1).ln()).norm() < 1e-13);
            assert!((l2 - (one - p.t2).ln()).norm() < 1e-13);
        }
    }

    #[test]
    fn s3_logs_differ_by_two_pi_in_the_south() {
        let sp = SphericalPoint::new(SpaceTag::S3, 2.5, 0.7, 0.0).unwrap();
        let p = spherical_to_parabolic(SpaceTag::S3, &sp).unwrap();
        let (l1, l2) = branch_logs(SpaceTag::S3, &p).unwrap();
        let one = C64::new(1.0, 0.0);
        let d1 = l1 - (one - p.t1).ln();
        let d2 = l2 - (one - p.t2).ln();
        assert!((d1 - C64::new(0.0, -2.0 * std::f64::consts::PI)).norm() < 1e-12, "{d1}");
        assert!(d2.norm() < 1e-12);
    }
}
