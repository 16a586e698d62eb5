use super::rng::RandomSource;
use crate::error::{Error, Result};

/// Normal variate by the Box–Muller transform (cosine branch only, two
/// uniforms per draw, so the stream position never depends on cached state).
pub fn draw_normal(rs: &mut RandomSource, mean: f64, sd: f64) -> Result<f64> {
    if !(sd >= 0.0) || !sd.is_finite() || !mean.is_finite() {
        return Err(Error::domain(format!(
            "normal requires finite mean and sd >= 0, got mean={mean}, sd={sd}"
        )));
    }
    if sd == 0.0 {
        return Ok(mean);
    }
    Ok(mean + sd * standard_normal(rs))
}

pub(crate) fn standard_normal(rs: &mut RandomSource) -> f64 {
    let u1 = rs.uniform_open();
    let u2 = rs.uniform();
    (-2.0 * u1.ln()).sqrt() * (std::f64::consts::TAU * u2).cos()
}

/// Gamma(shape, 1) variate, Marsaglia–Tsang squeeze method. Shapes below one
/// use the `U^(1/shape)` boost.
pub(crate) fn standard_gamma(rs: &mut RandomSource, shape: f64) -> f64 {
    if shape < 1.0 {
        let g = standard_gamma(rs, shape + 1.0);
        return g * rs.uniform_open().powf(1.0 / shape);
    }
    let d = shape - 1.0 / 3.0;
    let c = 1.0 / (9.0 * d).sqrt();
    loop {
        let (x, v) = loop {
            let x = standard_normal(rs);
            let v = 1.0 + c * x;
            if v > 0.0 {
                break (x, v * v * v);
            }
        };
        let u = rs.uniform_open();
        let x2 = x * x;
        if u < 1.0 - 0.0331 * x2 * x2 {
            return d * v;
        }
        if u.ln() < 0.5 * x2 + d * (1.0 - v + v.ln()) {
            return d * v;
        }
    }
}

pub fn draw_gamma(rs: &mut RandomSource, shape: f64, scale: f64) -> Result<f64> {
    check_positive(shape, scale)?;
    Ok(scale * standard_gamma(rs, shape))
}

/// Inverse-gamma variate with density proportional to
/// `x^(-shape-1) exp(-scale / x)`, drawn as `scale / Gamma(shape, 1)`.
pub fn draw_inverse_gamma(rs: &mut RandomSource, shape: f64, scale: f64) -> Result<f64> {
    check_positive(shape, scale)?;
    loop {
        let g = standard_gamma(rs, shape);
        if g > 0.0 {
            return Ok(scale / g);
        }
    }
}

fn check_positive(shape: f64, scale: f64) -> Result<()> {
    if shape > 0.0 && scale > 0.0 && shape.is_finite() && scale.is_finite() {
        Ok(())
    } else {
        Err(Error::domain(format!(
            "shape and scale must be positive, got shape={shape}, scale={scale}"
        )))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn moments(xs: &[f64]) -> (f64, f64) {
        let n = xs.len() as f64;
        let m = xs.iter().sum::<f64>() / n;
        let v = xs.iter().map(|x| (x - m).powi(2)).sum::<f64>() / (n - 1.0);
        (m, v)
    }

    #[test]
    fn degenerate_normal() {
        let mut rs = RandomSource::new(1);
        assert_eq!(draw_normal(&mut rs, 5.0, 0.0).unwrap(), 5.0);
        assert!(draw_normal(&mut rs, 0.0, -1.0).is_err());
    }

    #[test]
    fn normal_moments_million() {
        let mut rs = RandomSource::new(2024);
        let xs: Vec<f64> = (0..1_000_000)
            .map(|_| draw_normal(&mut rs, 0.0, 1.0).unwrap())
            .collect();
        let (m, v) = moments(&xs);
        // 4 standard errors: 4/sqrt(1e6) = 0.004
        assert!(m.abs() < 0.004, "mean {m}");
        // var of sample variance ≈ 2/n
        assert!((v - 1.0).abs() < 4.0 * (2.0f64 / 1e6).sqrt(), "var {v}");
    }

    #[test]
    fn inverse_gamma_mean_million() {
        let mut rs = RandomSource::new(99);
        let (shape, scale) = (3.0, 2.0);
        let xs: Vec<f64> = (0..1_000_000)
            .map(|_| draw_inverse_gamma(&mut rs, shape, scale).unwrap())
            .collect();
        assert!(xs.iter().all(|&x| x > 0.0));
        let (m, _) = moments(&xs);
        // mean = 1, variance = scale²/((shape-1)²(shape-2)) = 1
        let se = (1.0f64 / 1e6).sqrt();
        assert!((m - 1.0).abs() < 4.0 * se, "mean {m}");
    }

    #[test]
    fn gamma_small_shape_moments() {
        let mut rs = RandomSource::new(5);
        let xs: Vec<f64> = (0..400_000).map(|_| draw_gamma(&mut rs, 0.4, 2.5).unwrap()).collect();
        let (m, v) = moments(&xs);
        // mean 1.0, variance 2.5
        assert!((m - 1.0).abs() < 4.0 * (2.5f64 / 4e5).sqrt());
        assert!((v - 2.5).abs() < 0.1);
    }

    #[test]
    fn invalid_shape_scale() {
        let mut rs = RandomSource::new(0);
        assert!(draw_inverse_gamma(&mut rs, 0.0, 1.0).is_err());
        assert!(draw_inverse_gamma(&mut rs, 1.0, -1.0).is_err());
    }
}
