//! Reference polynomials transcribed verbatim for regression comparisons.

use num_traits::Zero;

use crate::exactalg::MultiPoly;

/// The eliminant in `S01, x, y, c`.
pub const ETA: &str = "\
S01^7 (x^4 y^4 - 2x^4 y^2 + x^4) \
+ S01^6 (4c x^4 y^4 - 8c x^4 y^2 + 4c x^4 - 3x^4 y^4 + 6x^4 y^2 - 3x^4) \
+ S01^5 (6c^2 x^4 y^4 - 12c^2 x^4 y^2 + 6c^2 x^4 - 9c x^4 y^4 + 18c x^4 y^2 - 9c x^4 \
  + 3x^4 y^4 - 6x^4 y^2 + 3x^4 - 2x^2 y^2 - 2x^2) \
+ S01^4 (4c^3 x^4 y^4 - 8c^3 x^4 y^2 + 4c^3 x^4 - 9c^2 x^4 y^4 + 18c^2 x^4 y^2 - 9c^2 x^4 \
  + 6c x^4 y^4 - 12c x^4 y^2 + 6c x^4 - 6c x^2 y^2 - 6c x^2 - x^4 y^4 + 2x^4 y^2 - x^4 \
  + 4x^2 y^2 + 4x^2) \
+ S01^3 (c^4 x^4 y^4 - 2c^4 x^4 y^2 + c^4 x^4 - 3c^3 x^4 y^4 + 6c^3 x^4 y^2 - 3c^3 x^4 \
  + 3c^2 x^4 y^4 - 6c^2 x^4 y^2 + 3c^2 x^4 - 6c^2 x^2 y^2 - 7c^2 x^2 - c x^4 y^4 \
  + 2c x^4 y^2 - c x^4 + 9c x^2 y^2 + 9c x^2 - 3x^2 y^2 - 2x^2 + 1) \
+ S01^2 (-2c^3 x^2 y^2 - 4c^3 x^2 + 6c^2 x^2 y^2 + 7c^2 x^2 - 5c x^2 y^2 - 3c x^2 + 2c \
  + x^2 y^2 - 1) \
+ S01 (-c^4 x^2 + c^3 x^2 y^2 + 2c^3 x^2 - 2c^2 x^2 y^2 - c^2 x^2 + c^2 + c x^2 y^2 - 2c) \
- c^2";

/// The degree-six spectral curve in `W, z, y, c`.
pub const SEXTIC: &str = "\
W^6 (y^4 z^4 - 2y^2 z^4 + z^4) \
+ W^5 (3c y^4 z^3 - 6c y^2 z^3 + 3c z^3 - 3y^4 z^3 + 6y^2 z^3 - 3z^3) \
+ W^4 (3c^2 y^4 z^2 - 6c^2 y^2 z^2 + 3c^2 z^2 - 6c y^4 z^2 + 12c y^2 z^2 - 6c z^2 \
  + 3y^4 z^2 - 2y^2 z^3 - 6y^2 z^2 - 2z^3 + 3z^2) \
+ W^3 (c^3 y^4 z - 2c^3 y^2 z + c^3 z - 3c^2 y^4 z + 6c^2 y^2 z - 3c^2 z + 3c y^4 z \
  - 4c y^2 z^2 - 6c y^2 z - 4c z^2 + 3c z - y^4 z + 4y^2 z^2 + 2y^2 z + 4z^2 - z) \
+ W^2 (-2c^2 y^2 z - 3c^2 z + 5c y^2 z + 5c z - 3y^2 z + z^2 - 2z) \
+ W (-c^3 + c^2 y^2 + 2c^2 - 2c y^2 + c z - c + y^2 - z) \
- c";

/// The cubic curve of the balanced regime, in `W, z, c`.
pub const BALANCED_CUBIC: &str = "z^2 W^3 + 2(c - 1) z W^2 + ((c - 1)^2 - z) W + 1";

/// The sextic at `y = 0, c = 1` and its two factors.
pub const DEGENERATE_SEXTIC: &str = "W^6 z^4 - 2W^4 z^3 + W^2 z^2 - 1";
pub const DEGENERATE_FACTORS: [&str; 2] = ["W^3 z^2 - W z - 1", "W^3 z^2 - W z + 1"];

/// The first listed moments `M_0..M_3`.
pub const MOMENTS: [&str; 4] = [
    "1",
    "c^2 + c y^2",
    "c^4 + 4c^3 y^2 + 2c^3 + 2c^2 y^4 + 4c^2 y^2 + c y^4",
    "c^6 + 9c^5 y^2 + 6c^5 + 15c^4 y^4 + 30c^4 y^2 + 5c^4 + 5c^3 y^6 + 30c^3 y^4 \
     + 15c^3 y^2 + 6c^2 y^6 + 9c^2 y^4 + c y^6",
];

fn parse(text: &str) -> MultiPoly {
    text.parse().expect("reference polynomial parses")
}

pub fn eta() -> MultiPoly {
    parse(ETA)
}

pub fn sextic() -> MultiPoly {
    parse(SEXTIC)
}

pub fn balanced_cubic() -> MultiPoly {
    parse(BALANCED_CUBIC)
}

pub fn moments() -> Vec<MultiPoly> {
    MOMENTS.iter().map(|m| parse(m)).collect()
}

/// Term-level differences: `+term` only in `derived`, `-term` only in `reference`.
pub fn diff(derived: &MultiPoly, reference: &MultiPoly) -> Vec<String> {
    let mut out = Vec::new();
    let delta = derived - reference;
    for (e, c) in delta.terms().rev() {
        let term = MultiPoly::monomial(*e, c.clone());
        let in_ref = !reference.coefficient(e).is_zero();
        let in_der = !derived.coefficient(e).is_zero();
        let tag = match (in_der, in_ref) {
            (true, false) => "+",
            (false, true) => "-",
            _ => "~",
        };
        out.push(format!("{tag} {term}"));
    }
    out
}
