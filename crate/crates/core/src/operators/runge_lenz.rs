use super::*;
use crate::geometry::{quasi_to_parabolic, QuasiCartesian};
use crate::kepler::wavefunction;

pub const RUNGE_LENZ_TOL: f64 = 1e-4;
/// Step used for the order-of-convergence probe (large enough that
/// truncation dominates rounding).
pub const ORDER_PROBE_STEP: f64 = 5e-3;

type Field<'a> = dyn Fn([f64; 3]) -> Result<C64> + 'a;

fn gradient(f: &Field, q: [f64; 3], h: f64) -> Result<[C64; 3]> {
    let mut g = [C64::new(0.0, 0.0); 3];
    for (i, gi) in g.iter_mut().enumerate() {
        let (mut a, mut b) = (q, q);
        a[i] += h;
        b[i] -= h;
        *gi = (f(a)? - f(b)?) / (2.0 * h);
    }
    Ok(g)
}

const MINUS_I: C64 = C64 { re: 0.0, im: -1.0 };

/// P_i f = −i(∂_i f − σ q_i q·∇f) by central differences.
fn p_op(space: SpaceTag, i: usize, f: &Field, q: [f64; 3], h: f64) -> Result<C64> {
    let g = gradient(f, q, h)?;
    let radial: C64 = (0..3).map(|j| q[j] * g[j]).sum();
    Ok(MINUS_I * (g[i] - space.sigma() as f64 * q[i] * radial))
}

/// L_a f = (q × P f)_a; the radial parts of P cancel in the cross product.
fn l_op(a: usize, f: &Field, q: [f64; 3], h: f64) -> Result<C64> {
    let g = gradient(f, q, h)?;
    let (b, c) = ((a + 1) % 3, (a + 2) % 3);
    Ok(MINUS_I * (q[b] * g[c] - q[c] * g[b]))
}

/// (A3 + L²)Ψ on H₃ or (A3 + iL²)Ψ on S₃, with
/// A3 = e q3/q + ½(L1P2 − L2P1 − P1L2 + P2L1), all by nested differences.
fn runge_lenz_side(state: &StateParams, psi: &Field, q: [f64; 3], h: f64) -> Result<C64> {
    let sp = state.space;
    let lp = |a: usize, b: usize| -> Result<C64> { l_op(a, &|x| p_op(sp, b, psi, x, h), q, h) };
    let pl = |a: usize, b: usize| -> Result<C64> { p_op(sp, a, &|x| l_op(b, psi, x, h), q, h) };
    let w3 = 0.5 * (lp(0, 1)? - lp(1, 0)? - pl(0, 1)? + pl(1, 0)?);
    let mut l2 = C64::new(0.0, 0.0);
    for a in 0..3 {
        l2 += l_op(a, &|x| l_op(a, psi, x, h), q, h)?;
    }
    let r = (q[0] * q[0] + q[1] * q[1] + q[2] * q[2]).sqrt();
    let a3 = state.e * q[2] / r * psi(q)? + w3;
    Ok(match sp {
        SpaceTag::H3 => a3 + l2,
        SpaceTag::S3 => a3 + C64::new(0.0, 1.0) * l2,
    })
}

/// Compare the finite-difference Runge–Lenz side with the exact B operator:
/// B = A3 + L² on H₃ and iB = A3 + iL² on S₃.
///
/// The step at each point is h·max(1, |q|) with one Richardson level
/// (h, h/2). The report carries the observed order of the plain central
/// scheme from a separate probe at `ORDER_PROBE_STEP`.
pub fn runge_lenz_check(state: &StateParams, sample: &[QuasiCartesian], h: f64) -> Result<ResidualReport> {
    if !(h > 0.0 && h.is_finite()) {
        return Err(Error::Parameter(format!("step h = {h}")));
    }
    let space = state.space;
    let psi = |x: [f64; 3]| -> Result<C64> {
        let p = quasi_to_parabolic(space, &QuasiCartesian::from_array(x))?;
        wavefunction(state, &p)
    };
    let factor = match space {
        SpaceTag::H3 => C64::new(1.0, 0.0),
        SpaceTag::S3 => C64::new(0.0, 1.0),
    };
    struct Row {
        q: [f64; 3],
        psi: C64,
        exact: C64,
        rich: C64,
        probe: (C64, C64),
    }
    let mut acc = Accumulator::new();
    let mut rows = Vec::new();
    for qc in sample {
        let q = qc.as_array();
        let r = qc.radius();
        let heff = h * r.max(1.0);
        let reach = 2.0 * heff.max(ORDER_PROBE_STEP * r.max(1.0));
        if r < 0.05 || (space == SpaceTag::H3 && r + reach >= 1.0) {
            acc.skip();
            continue;
        }
        let row = (|| -> Result<Row> {
            let p = quasi_to_parabolic(space, qc)?;
            let (b, psi0) = b_operator_apply(state, &p)?;
            let coarse = runge_lenz_side(state, &psi, q, heff)?;
            let fine = runge_lenz_side(state, &psi, q, 0.5 * heff)?;
            let hp = ORDER_PROBE_STEP * r.max(1.0);
            let probe = (runge_lenz_side(state, &psi, q, hp)?, runge_lenz_side(state, &psi, q, 0.5 * hp)?);
            Ok(Row { q, psi: psi0, exact: factor * b, rich: (4.0 * fine - coarse) / 3.0, probe })
        })();
        match row {
            Ok(r) => rows.push(r),
            Err(_) => acc.skip(),
        }
    }
    let s = rows.iter().map(|r| r.psi.norm()).fold(0.0, f64::max).max(f64::MIN_POSITIVE);
    let lam = state.b_eigenvalue();
    let (mut e_coarse, mut e_fine) = (0.0f64, 0.0f64);
    for r in &rows {
        let d = (r.rich - r.exact).norm() / s;
        acc.push(&r.q, d * s, d / (1.0 + (lam * r.psi).norm() / s));
        e_coarse = e_coarse.max((r.probe.0 - r.exact).norm() / s);
        e_fine = e_fine.max((r.probe.1 - r.exact).norm() / s);
    }
    let order = (e_coarse / e_fine).log2();
    Ok(acc
        .finish(&format!("runge-lenz-{space}"), RUNGE_LENZ_TOL)
        .with_detail("observed_order", order)
        .with_detail("probe_error_h", e_coarse)
        .with_detail("probe_error_h_half", e_fine)
        .with_check("order_in_range", (order - 2.0).abs() <= 0.2))
}
