use super::*;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FlatLimitRow {
    pub rho: f64,
    /// |ρ t1 − ξ| (H₃) or |−iρ t1 − ξ| (S₃), ξ = z + r.
    pub err_t1: f64,
    /// Same for t2 against −η = z − r.
    pub err_t2: f64,
}

impl FlatLimitRow {
    pub fn err(&self) -> f64 {
        self.err_t1.max(self.err_t2)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FlatLimitTable {
    pub space: SpaceTag,
    pub point: [f64; 3],
    pub rows: Vec<FlatLimitRow>,
    /// Least-squares slope of ln err against ln ρ; `None` when degenerate.
    pub slope: Option<f64>,
    pub degenerate: bool,
}

/// Embed a Euclidean point at geodesic scale 1/ρ and compare the scaled
/// parabolic coordinates with the flat ones, ξ = z + r and −η = z − r.
pub fn flat_limit_coords(space: SpaceTag, rhos: &[f64], point: [f64; 3]) -> Result<FlatLimitTable> {
    let [x, y, z] = point;
    let r = (x * x + y * y + z * z).sqrt();
    if !r.is_finite() {
        return Err(Error::Domain("non-finite Euclidean point".into()));
    }
    if rhos.windows(2).any(|w| !(w[1] > w[0])) {
        return Err(Error::Parameter("rho list must be strictly increasing".into()));
    }
    if let Some(bad) = rhos.iter().find(|&&rho| !(rho >= 10.0 * r) || !(rho > 0.0)) {
        return Err(Error::Parameter(format!("rho = {bad} must be positive and at least 10 |point|")));
    }
    if r == 0.0 {
        let rows = rhos.iter().map(|&rho| FlatLimitRow { rho, err_t1: 0.0, err_t2: 0.0 }).collect();
        return Ok(FlatLimitTable { space, point, rows, slope: None, degenerate: true });
    }
    let theta = (x * x + y * y).sqrt().atan2(z);
    let phi = wrap_angle(y.atan2(x));
    let mut rows = Vec::with_capacity(rhos.len());
    for &rho in rhos {
        let sp = SphericalPoint::new(space, r / rho, theta, phi)?;
        let p = spherical_to_parabolic(space, &sp)?;
        let scale = match space {
            SpaceTag::H3 => C64::new(rho, 0.0),
            SpaceTag::S3 => C64::new(0.0, -rho),
        };
        rows.push(FlatLimitRow {
            rho,
            err_t1: (scale * p.t1 - (z + r)).norm(),
            err_t2: (scale * p.t2 - (z - r)).norm(),
        });
    }
    let slope = log_log_slope(&rows);
    Ok(FlatLimitTable { space, point, rows, slope, degenerate: false })
}

fn log_log_slope(rows: &[FlatLimitRow]) -> Option<f64> {
    let pts: Vec<(f64, f64)> = rows.iter().filter(|r| r.err() > 0.0).map(|r| (r.rho.ln(), r.err().ln())).collect();
    if pts.len() < 2 {
        return None;
    }
    let n = pts.len() as f64;
    let mx = pts.iter().map(|p| p.0).sum::<f64>() / n;
    let my = pts.iter().map(|p| p.1).sum::<f64>() / n;
    let sxy: f64 = pts.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    let sxx: f64 = pts.iter().map(|p| (p.0 - mx) * (p.0 - mx)).sum();
    Some(sxy / sxx)
}
