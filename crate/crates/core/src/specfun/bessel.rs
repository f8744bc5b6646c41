use super::SpecFunError;

const SERIES_LIMIT: f64 = 20.0;

/// Modified Bessel function of the first kind, order zero.
pub fn bessel_i0(x: f64) -> Result<f64, SpecFunError> {
    if !(0.0..=700.0).contains(&x) {
        return Err(SpecFunError::Domain(x));
    }
    if x <= SERIES_LIMIT {
        let q = x * x / 4.0;
        let mut term = 1.0;
        let mut sum = 1.0;
        let mut m = 1.0;
        while term > 1e-17 * sum {
            term *= q / (m * m);
            sum += term;
            m += 1.0;
        }
        Ok(sum)
    } else {
        // e^x / sqrt(2 pi x) * sum ((2k-1)!!)^2 / (k! (8x)^k)
        let mut term = 1.0;
        let mut sum = 1.0;
        let mut k = 1.0;
        loop {
            let next = term * (2.0 * k - 1.0) * (2.0 * k - 1.0) / (k * 8.0 * x);
            if next >= term || next < 1e-17 * sum {
                break;
            }
            term = next;
            sum += term;
            k += 1.0;
        }
        Ok(x.exp() / (2.0 * std::f64::consts::PI * x).sqrt() * sum)
    }
}
