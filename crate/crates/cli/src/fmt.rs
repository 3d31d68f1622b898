//! Deterministic 9-significant-digit formatting for reports and plot data.
//!
//! Rust's float formatting is correctly rounded and identical across
//! platforms, so fixing the significant digits fixes the output bytes.

const SIG: usize = 9;

/// Format with exactly 9 significant digits, plain decimal for moderate
/// magnitudes and scientific notation otherwise (like `%.9g` without
/// zero-stripping).
pub fn g9(x: f64) -> String {
    assert!(x.is_finite(), "report values must be finite, got {x}");
    // round to 9 significant digits first to learn the decimal exponent
    let sci = format!("{:.*e}", SIG - 1, x);
    let exp: i32 = sci[sci.find('e').expect("exponent marker") + 1..]
        .parse()
        .expect("well-formed exponent");
    if (-4..=(SIG as i32 - 1)).contains(&exp) {
        let decimals = (SIG as i32 - 1 - exp) as usize;
        format!("{x:.decimals$}")
    } else {
        sci
    }
}
