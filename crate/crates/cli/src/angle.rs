//! Angles on the command line: plain radians or multiples of pi such as
//! `pi/3`, `2pi/3`, `2*pi/3` or `π/4`.

use std::f64::consts::{FRAC_PI_2, PI};

use qstab_core::states::QubitPair;

pub fn parse_angle(text: &str) -> Result<f64, String> {
    let s: String = text
        .chars()
        .filter(|c| !c.is_whitespace())
        .collect::<String>()
        .to_lowercase()
        .replace('π', "pi");
    let value = match s.find("pi") {
        None => s
            .parse::<f64>()
            .map_err(|_| format!("cannot read angle '{text}'"))?,
        Some(at) => {
            let coef = s[..at].trim_end_matches('*');
            let coef = match coef {
                "" => 1.0,
                "-" => -1.0,
                c => c
                    .parse::<f64>()
                    .map_err(|_| format!("bad multiplier in '{text}'"))?,
            };
            let rest = &s[at + 2..];
            let denom = match rest {
                "" => 1.0,
                r => r
                    .strip_prefix('/')
                    .and_then(|d| d.parse::<f64>().ok())
                    .filter(|d| *d != 0.0)
                    .ok_or_else(|| format!("bad divisor in '{text}'"))?,
            };
            coef * PI / denom
        }
    };
    if !value.is_finite() {
        return Err(format!("angle '{text}' is not finite"));
    }
    Ok(value)
}

/// `θ` in `[0, π]`. Angles past `π/2` give a negative overlap `cos θ`; they
/// are folded to `π − θ`, which leaves `|c|` and every derived quantity
/// unchanged.
pub fn qubit_pair(theta: f64) -> Result<QubitPair, String> {
    if !(0.0..=PI).contains(&theta) {
        return Err(format!("theta = {theta} is outside [0, pi]"));
    }
    let folded = if theta > FRAC_PI_2 { PI - theta } else { theta };
    QubitPair::new(folded.min(FRAC_PI_2)).map_err(|e| e.to_string())
}
