//! Numeric formatting for file output.

/// 17 significant digits: round-trip exact for f64. Negative zero (an
/// artifact of sign-flip coins on empty blocks) prints as plain zero.
pub(crate) fn g17(x: f64) -> String {
    let x = if x == 0.0 { 0.0 } else { x };
    format!("{x:.16e}")
}

#[cfg(test)]
mod tests {
    use super::g17;

    #[test]
    fn round_trips_doubles() {
        for x in [0.1, 1.0 / 3.0, 0.887_386_743_643_493_7, -2.5e-13, 1.0, 0.0] {
            assert_eq!(g17(x).parse::<f64>().unwrap(), x);
        }
        assert_eq!(g17(1.0), "1.0000000000000000e0");
        assert_eq!(g17(-0.0), "0.0000000000000000e0");
    }
}
