use super::*;
use crate::specfun::hyp2f1;

fn check_nl(n: u32, l: u32) -> Result<()> {
    if n == 0 || l >= n {
        return Err(Error::Parameter(format!("need n >= 1 and 0 <= l <= n-1, got n = {n}, l = {l}")));
    }
    Ok(())
}

/// Spherical-chart radial function (unnormalized):
///
/// H₃: sinh^l χ · exp[(n − l − 1 − e/n) χ] · F(e/n + l + 1, l − n + 1, 2l + 2; 1 − e^{−2χ})
/// S₃: sin^l χ · exp[(i(n − l − 1) − e/n) χ] · F(−ie/n + l + 1, l − n + 1, 2l + 2; 1 − e^{−2iχ})
pub fn radial_spherical(space: SpaceTag, e: f64, n: u32, l: u32, chi: f64) -> Result<C64> {
    check_nl(n, l)?;
    check_coupling(e)?;
    let chi_ok = match space {
        SpaceTag::H3 => chi.is_finite() && chi >= 0.0,
        SpaceTag::S3 => (0.0..=std::f64::consts::PI).contains(&chi),
    };
    if !chi_ok {
        return Err(Error::Domain(format!("chi = {chi} outside the {space} range")));
    }
    let (nf, lf) = (n as f64, l as f64);
    match space {
        SpaceTag::H3 => radial_h3_complex(C64::new(e, 0.0), n, l, C64::new(chi, 0.0)),
        SpaceTag::S3 => {
            let params = Hyp2F1Params::new(
                C64::new(lf + 1.0, -e / nf),
                C64::new(lf - nf + 1.0, 0.0),
                C64::new(2.0 * lf + 2.0, 0.0),
            );
            let arg = C64::new(1.0, 0.0) - C64::new(0.0, -2.0 * chi).exp();
            let pre = chi.sin().powi(l as i32) * (C64::new(-e / nf, nf - lf - 1.0) * chi).exp();
            Ok(pre * hyp2f1(&params, arg)?)
        }
    }
}

/// The H₃ radial formula continued to complex χ and complex coupling; the
/// substitution χ → iχ, e → −ie maps it onto the S₃ function up to i^l.
pub fn radial_h3_complex(e: C64, n: u32, l: u32, chi: C64) -> Result<C64> {
    check_nl(n, l)?;
    let (nf, lf) = (n as f64, l as f64);
    let params = Hyp2F1Params::new(e / nf + lf + 1.0, C64::new(lf - nf + 1.0, 0.0), C64::new(2.0 * lf + 2.0, 0.0));
    let arg = C64::new(1.0, 0.0) - (-2.0 * chi).exp();
    let pre = chi.sinh().powi(l as i32) * ((nf - lf - 1.0 - e / nf) * chi).exp();
    Ok(pre * hyp2f1(&params, arg)?)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn top_l_has_trivial_polynomial() {
        let v = radial_spherical(SpaceTag::H3, 5.0, 3, 2, 0.7).unwrap();
        let want = 0.7f64.sinh().powi(2) * (-(5.0 / 3.0) * 0.7f64).exp();
        assert!((v.re - want).abs() < 1e-15 * want);
    }

    #[test]
    fn vanishes_at_origin_for_positive_l() {
        for space in SpaceTag::ALL {
            assert_eq!(radial_spherical(space, 2.0, 3, 1, 0.0).unwrap().norm(), 0.0);
        }
    }

    #[test]
    fn rejects_bad_quantum_numbers() {
        assert!(radial_spherical(SpaceTag::S3, 2.0, 2, 2, 0.5).is_err());
        assert!(radial_spherical(SpaceTag::S3, 2.0, 2, 1, 4.0).is_err());
    }
}
