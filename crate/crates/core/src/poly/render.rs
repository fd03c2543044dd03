//! Text rendering in the syntax accepted by [`super::parse_poly`].

use super::{PolyError, Polynomial};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum RenderStyle {
    /// Coefficients printed as residues in `[0, p)`.
    Plain,
    /// Each coefficient printed as `m` or `v*i` with the smaller `|m|`/`|v|`.
    WithI,
}

/// A coefficient as a signed multiple of `1` or of `i`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Coeff {
    Real(i64),
    Imag(i64),
}

impl Coeff {
    fn magnitude(self) -> u64 {
        match self {
            Coeff::Real(m) | Coeff::Imag(m) => m.unsigned_abs(),
        }
    }

    fn is_negative(self) -> bool {
        match self {
            Coeff::Real(m) | Coeff::Imag(m) => m < 0,
        }
    }
}

pub(super) fn render(poly: &Polynomial, style: RenderStyle) -> Result<String, PolyError> {
    let m = poly.modulus();
    let i = match style {
        RenderStyle::Plain => None,
        RenderStyle::WithI => Some(
            m.sqrt_minus_one()
                .ok_or(PolyError::IUnavailable(m.get()))?
                .value(),
        ),
    };
    if poly.is_zero() {
        return Ok("0".to_string());
    }
    let mut out = String::new();
    for (power, &c) in poly.coeffs().iter().enumerate().rev() {
        if c == 0 {
            continue;
        }
        let coeff = match i {
            None => Coeff::Real(c as i64),
            Some(i) => {
                // c = v * i  <=>  v = -c * i
                let real = Coeff::Real(m.signed(c));
                let imag = Coeff::Imag(m.signed(m.neg(m.mul(c, i))));
                // |m| = |v| would force 2m^2 = 0, so there are no ties.
                if imag.magnitude() < real.magnitude() {
                    imag
                } else {
                    real
                }
            }
        };
        if coeff.is_negative() {
            out.push('-');
        } else if !out.is_empty() {
            out.push('+');
        }
        let mag = coeff.magnitude();
        let mut factors: Vec<String> = Vec::with_capacity(3);
        match coeff {
            Coeff::Real(_) => {
                if mag != 1 || power == 0 {
                    factors.push(mag.to_string());
                }
            }
            Coeff::Imag(_) => {
                if mag != 1 {
                    factors.push(mag.to_string());
                }
                factors.push("i".to_string());
            }
        }
        match power {
            0 => {}
            1 => factors.push("t".to_string()),
            k => factors.push(format!("t^{k}")),
        }
        out.push_str(&factors.join("*"));
    }
    Ok(out)
}
