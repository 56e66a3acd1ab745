//! Parse Hurst function expressions and report errors with their position.

use mfrac::expr::parse_hurst_expr;

fn main() {
    for src in [
        "0.4 - 0.25*sin(6*pi*t)",
        "ifelse(t < 0.5, 0.3, 0.7)",
        "0.3 + * t",
        "1.5",
    ] {
        match parse_hurst_expr(src).and_then(|e| e.validate(1025).map(|clamped| (e, clamped))) {
            Ok((e, clamped)) => println!(
                "{src:<28} H(0) = {:.3}, H(1) = {:.3}, clamped at {clamped} of 1025 points",
                e.eval(0.0),
                e.eval(1.0)
            ),
            Err(err) => println!("{src:<28} {err}"),
        }
    }
}
