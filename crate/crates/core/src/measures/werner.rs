//! Closed forms along the Werner line `t = (−w, −w, −w)`.

use std::f64::consts::SQRT_2;

use super::entanglement::eof_from_concurrence;
use crate::bds::WernerParam;
use crate::linalg::binary_entropy;

fn xlog2x(x: f64) -> f64 {
    if x <= 0.0 {
        0.0
    } else {
        x * x.log2()
    }
}

pub fn concurrence_werner(w: WernerParam) -> f64 {
    ((3.0 * w.value() - 1.0) / 2.0).max(0.0)
}

pub fn eof_werner(w: WernerParam) -> f64 {
    eof_from_concurrence(concurrence_werner(w))
}

pub fn nonlocality_werner(w: WernerParam) -> f64 {
    ((SQRT_2 * w.value() - 1.0) / (SQRT_2 - 1.0)).max(0.0)
}

pub fn steering3_werner(w: WernerParam) -> f64 {
    let s3 = 3f64.sqrt();
    ((s3 * w.value() - 1.0) / (s3 - 1.0)).max(0.0)
}

pub fn classical_correlation_werner(w: WernerParam) -> f64 {
    1.0 - binary_entropy((1.0 - w.value()) / 2.0).expect("argument in [0, ½]")
}

pub fn mutual_information_werner(w: WernerParam) -> f64 {
    let w = w.value();
    0.25 * (3.0 * xlog2x(1.0 - w) + xlog2x(1.0 + 3.0 * w))
}

/// `¼(1−w)log₂(1−w) − ½(1+w)log₂(1+w) + ¼(1+3w)log₂(1+3w)`.
pub fn discord_werner(w: WernerParam) -> f64 {
    let w = w.value();
    (0.25 * xlog2x(1.0 - w) - 0.5 * xlog2x(1.0 + w) + 0.25 * xlog2x(1.0 + 3.0 * w)).max(0.0)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn discord_at_half() {
        let w = WernerParam::new(0.5).unwrap();
        let direct = 0.25 * 0.5 * 0.5f64.log2() - 0.5 * 1.5 * 1.5f64.log2() + 0.25 * 2.5 * 2.5f64.log2();
        assert!((discord_werner(w) - direct).abs() < 1e-15);
        assert!((discord_werner(w) - 0.262_483).abs() < 1e-6);
        assert!((classical_correlation_werner(w) - 0.188_722).abs() < 1e-6);
    }

    #[test]
    fn endpoints() {
        let one = WernerParam::new(1.0).unwrap();
        assert!((discord_werner(one) - 1.0).abs() < 1e-15);
        assert!((mutual_information_werner(one) - 2.0).abs() < 1e-15);
        let zero = WernerParam::new(0.0).unwrap();
        assert_eq!(discord_werner(zero), 0.0);
        assert_eq!(eof_werner(zero), 0.0);
    }

    #[test]
    fn discord_is_mutual_information_minus_classical() {
        for i in 0..=20 {
            let w = WernerParam::new(i as f64 / 20.0).unwrap();
            let d = mutual_information_werner(w) - classical_correlation_werner(w);
            assert!((discord_werner(w) - d).abs() < 1e-12);
        }
    }
}
