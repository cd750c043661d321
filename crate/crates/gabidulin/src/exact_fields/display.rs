//! Plain-text rendering of tower elements: polynomial notation with one
//! letter per layer ('a' for the top layer, then 'b', 'c', ...), terms in
//! descending degree, canonical representatives for prime fields.

use std::fmt;

use num_traits::Signed;

use super::{FieldElement, Scalar};

/// Wrapper that formats a [`FieldElement`] for humans; used by the CLI
/// trace output, so its exact form is part of the golden-trace contract.
pub struct Pretty<'a>(pub &'a FieldElement);

fn var_for_depth(depth: usize) -> char {
    // depth 0 = top layer
    (b'a' + (depth as u8)) as char
}

fn fmt_element(x: &FieldElement, depth: usize, f: &mut fmt::Formatter<'_>) -> fmt::Result {
    match x {
        FieldElement::Base(Scalar::Fp(v)) => write!(f, "{v}"),
        FieldElement::Base(Scalar::Q(r)) => {
            if r.is_integer() {
                write!(f, "{}", r.numer())
            } else {
                write!(f, "{}/{}", r.numer(), r.denom())
            }
        }
        FieldElement::Ext(coeffs) => {
            let var = var_for_depth(depth);
            let mut first = true;
            for i in (0..coeffs.len()).rev() {
                let c = &coeffs[i];
                if c.is_zero() {
                    continue;
                }
                // negative rational leading coefficients render as "- t"
                let (neg, cabs);
                match c {
                    FieldElement::Base(Scalar::Q(r)) if r.is_negative() => {
                        neg = true;
                        cabs = FieldElement::Base(Scalar::Q(r.abs()));
                    }
                    _ => {
                        neg = false;
                        cabs = c.clone();
                    }
                }
                if first {
                    if neg {
                        write!(f, "-")?;
                    }
                    first = false;
                } else if neg {
                    write!(f, " - ")?;
                } else {
                    write!(f, " + ")?;
                }
                let skip_coeff = i > 0 && cabs.is_one();
                if !skip_coeff {
                    if needs_parens(&cabs) {
                        write!(f, "(")?;
                        fmt_element(&cabs, depth + 1, f)?;
                        write!(f, ")")?;
                    } else {
                        fmt_element(&cabs, depth + 1, f)?;
                    }
                    if i > 0 {
                        write!(f, "*")?;
                    }
                }
                match i {
                    0 => {}
                    1 => write!(f, "{var}")?,
                    _ => write!(f, "{var}^{i}")?,
                }
            }
            if first {
                write!(f, "0")?;
            }
            Ok(())
        }
    }
}

fn needs_parens(x: &FieldElement) -> bool {
    match x {
        FieldElement::Base(Scalar::Fp(_)) => false,
        FieldElement::Base(Scalar::Q(r)) => !r.is_integer(),
        FieldElement::Ext(coeffs) => coeffs.iter().filter(|c| !c.is_zero()).count() != 1 || coeffs[0].is_zero(),
    }
}

impl fmt::Display for Pretty<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt_element(self.0, 0, f)
    }
}

/// Render a list of elements as `[x1, x2, ...]`.
pub fn pretty_list(xs: &[FieldElement]) -> String {
    let body: Vec<String> = xs.iter().map(|x| Pretty(x).to_string()).collect();
    format!("[{}]", body.join(", "))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact_fields::{cyclotomic_tower, extend_by_ints, FieldTower};

    #[test]
    fn renders_descending_terms() {
        let tw = extend_by_ints(&FieldTower::prime_field(3).unwrap(), &[1, 1, 1, 1, 1, 1, 1]).unwrap();
        let mut c = vec![tw.int_at(0, 1), tw.int_at(0, 2), tw.int_at(0, 0)];
        c.resize(6, tw.int_at(0, 0));
        c[5] = tw.int_at(0, 2);
        let x = tw.from_coeffs(1, c).unwrap();
        assert_eq!(Pretty(&x).to_string(), "2*a^5 + 2*a + 1");
        assert_eq!(Pretty(&tw.zero()).to_string(), "0");
        assert_eq!(Pretty(&tw.one()).to_string(), "1");
        assert_eq!(Pretty(&tw.generator(1)).to_string(), "a");
    }

    #[test]
    fn renders_rationals_and_negative_terms() {
        let tw = cyclotomic_tower(7).unwrap();
        let a = tw.generator(1);
        let x = tw.sub(&tw.mul(&tw.int(2), &tw.pow(&a, 3)), &tw.one());
        assert_eq!(Pretty(&x).to_string(), "2*a^3 - 1");
    }
}
