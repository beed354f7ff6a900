//! Maps between numeric lines, drawn from a closed family: affine maps with
//! nonnegative slope, floor and ceiling division, constants and their
//! compositions. Every breakpoint of such a map sits on a rational grid
//! whose denominator is read off the coefficients.

use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::poset::LineKind;
use crate::rational::{self, Rational};

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Expr {
    /// `a·x + b`, `a ≥ 0`.
    Affine { a: Rational, b: Rational },
    /// `⌊x/k⌋`, `k > 0`.
    FloorDiv(Rational),
    /// `⌈x/k⌉`, `k > 0`.
    CeilDiv(Rational),
    Const(Rational),
    /// `outer(inner(x))`.
    Compose(Box<Expr>, Box<Expr>),
}

impl Expr {
    pub fn identity() -> Self {
        Expr::Affine { a: Rational::one(), b: Rational::zero() }
    }

    pub fn scale(a: Rational) -> Self {
        Expr::Affine { a, b: Rational::zero() }
    }

    pub fn affine(a: Rational, b: Rational) -> Self {
        Expr::Affine { a, b }
    }

    /// `outer ∘ inner`.
    pub fn compose(outer: Expr, inner: Expr) -> Self {
        Expr::Compose(Box::new(outer), Box::new(inner))
    }

    pub fn validate(&self) -> Result<()> {
        match self {
            Expr::Affine { a, .. } if a.is_negative() => {
                Err(Error::Invalid(format!("affine slope {} is negative", rational::format(a))))
            }
            Expr::FloorDiv(k) | Expr::CeilDiv(k) if !k.is_positive() => {
                Err(Error::Invalid(format!("divisor {} is not positive", rational::format(k))))
            }
            Expr::Compose(o, i) => {
                o.validate()?;
                i.validate()
            }
            _ => Ok(()),
        }
    }

    pub fn eval(&self, x: &Rational) -> Rational {
        match self {
            Expr::Affine { a, b } => a * x + b,
            Expr::FloorDiv(k) => (x / k).floor(),
            Expr::CeilDiv(k) => (x / k).ceil(),
            Expr::Const(c) => c.clone(),
            Expr::Compose(o, i) => o.eval(&i.eval(x)),
        }
    }

    /// lcm of the denominators in the expression, counting `1/k` for the
    /// divisions. This is the grid refinement needed to see every breakpoint.
    pub fn denominators(&self) -> BigInt {
        match self {
            Expr::Affine { a, b } => rational::lcm(a.denom(), b.denom()),
            Expr::FloorDiv(k) | Expr::CeilDiv(k) => rational::lcm(k.numer(), k.denom()),
            Expr::Const(c) => c.denom().clone(),
            Expr::Compose(o, i) => rational::lcm(&o.denominators(), &i.denominators()),
        }
    }

    /// lcm of every numerator and denominator; a grid fine enough to hold
    /// preimages of grid points.
    pub fn scales(&self) -> BigInt {
        let one = |q: &Rational| -> BigInt {
            let n = if q.numer().is_zero() { BigInt::one() } else { q.numer().abs() };
            rational::lcm(&n, q.denom())
        };
        match self {
            Expr::Affine { a, b } => rational::lcm(&one(a), &one(b)),
            Expr::FloorDiv(k) | Expr::CeilDiv(k) | Expr::Const(k) => one(k),
            Expr::Compose(o, i) => rational::lcm(&o.scales(), &i.scales()),
        }
    }

    /// Whether every output is an integer, given whether inputs are.
    pub fn is_integral(&self, integral_input: bool) -> bool {
        match self {
            Expr::FloorDiv(_) | Expr::CeilDiv(_) => true,
            Expr::Affine { a, b } => (integral_input || a.is_zero()) && a.is_integer() && b.is_integer(),
            Expr::Const(c) => c.is_integer(),
            Expr::Compose(o, i) => o.is_integral(i.is_integral(integral_input)),
        }
    }

    /// Right adjoint `G(d) = max{c : F(c) ≤ d}` of this map `F: source → target`.
    ///
    /// `Ok(None)` means no right adjoint exists on these lines;
    /// `Err(Unsupported)` means the rule table cannot decide.
    pub fn right_adjoint(&self, source: LineKind, target: LineKind) -> Result<Option<Expr>> {
        let target_integral = target == LineKind::Naturals;
        let raw = match self {
            Expr::Affine { a, b } if a.is_zero() => {
                let _ = b;
                return Ok(None);
            }
            Expr::Const(_) => return Ok(None),
            Expr::Affine { a, b } => {
                if b.is_positive() {
                    // d < b has no c with F(c) ≤ d
                    return Ok(None);
                }
                if b.is_negative() {
                    return Err(Error::NotTotal(format!("{self} is negative at 0")));
                }
                Expr::scale(a.recip())
            }
            Expr::CeilDiv(k) => {
                // ⌈c/k⌉ ≤ d ⟺ c ≤ k⌊d⌋
                if target_integral {
                    Expr::scale(k.clone())
                } else {
                    Expr::compose(Expr::scale(k.clone()), Expr::FloorDiv(Rational::one()))
                }
            }
            Expr::FloorDiv(k) => {
                // ⌊c/k⌋ ≤ ⌊d⌋ ⟺ c < k(⌊d⌋ + 1): the bound is attained only on ℕ
                if source == LineKind::Reals {
                    return Ok(None);
                }
                let floor_d = |e: Expr| {
                    if target_integral {
                        e
                    } else {
                        Expr::compose(e, Expr::FloorDiv(Rational::one()))
                    }
                };
                if k.is_integer() {
                    floor_d(Expr::affine(k.clone(), k - Rational::one()))
                } else {
                    let bound = Expr::compose(Expr::CeilDiv(Rational::one()), floor_d(Expr::affine(k.clone(), k.clone())));
                    Expr::compose(Expr::affine(Rational::one(), -Rational::one()), bound)
                }
            }
            Expr::Compose(outer, inner) => {
                let mid = kind_of(inner.is_integral(source == LineKind::Naturals));
                let g_outer = outer.right_adjoint(mid, target)?;
                let g_inner = inner.right_adjoint(source, mid)?;
                return match (g_outer, g_inner) {
                    (Some(go), Some(gi)) => Ok(Some(Expr::compose(gi, go))),
                    _ => Err(Error::Unsupported(format!(
                        "a component of {self} has no right adjoint; the composite is undecided"
                    ))),
                };
            }
        };
        Ok(Some(round_into(raw, source, target_integral, Rounding::Down)))
    }

    /// Left adjoint `F(c) = min{d : c ≤ G(d)}` of this map `G: source → target`.
    /// The result maps `target → source`.
    pub fn left_adjoint(&self, source: LineKind, target: LineKind) -> Result<Option<Expr>> {
        let target_integral = target == LineKind::Naturals;
        let raw = match self {
            Expr::Affine { a, .. } if a.is_zero() => return Ok(None),
            Expr::Const(_) => return Ok(None),
            Expr::Affine { a, b } => {
                if b.is_negative() {
                    return Err(Error::NotTotal(format!("{self} is negative at 0")));
                }
                if b.is_positive() {
                    return Err(Error::Unsupported(format!(
                        "left adjoint of {self} needs max(0, ·), outside the map family"
                    )));
                }
                Expr::scale(a.recip())
            }
            Expr::FloorDiv(k) => {
                // c ≤ ⌊d/k⌋ ⟺ d ≥ k⌈c⌉
                if target_integral {
                    Expr::scale(k.clone())
                } else {
                    Expr::compose(Expr::scale(k.clone()), Expr::CeilDiv(Rational::one()))
                }
            }
            Expr::CeilDiv(k) => {
                // c ≤ ⌈d/k⌉ ⟺ d > k(⌈c⌉ - 1): attained only on ℕ
                if source == LineKind::Reals {
                    return Ok(None);
                }
                if k.is_one() {
                    if target_integral {
                        Expr::identity()
                    } else {
                        Expr::CeilDiv(Rational::one())
                    }
                } else {
                    return Err(Error::Unsupported(format!(
                        "left adjoint of {self} needs max(0, ·), outside the map family"
                    )));
                }
            }
            Expr::Compose(outer, inner) => {
                let mid = kind_of(inner.is_integral(source == LineKind::Naturals));
                let l_outer = outer.left_adjoint(mid, target)?;
                let l_inner = inner.left_adjoint(source, mid)?;
                return match (l_outer, l_inner) {
                    (Some(lo), Some(li)) => Ok(Some(Expr::compose(li, lo))),
                    _ => Err(Error::Unsupported(format!(
                        "a component of {self} has no left adjoint; the composite is undecided"
                    ))),
                };
            }
        };
        Ok(Some(round_into(raw, source, target_integral, Rounding::Up)))
    }

    fn render_with(&self, x: &str) -> String {
        let atom = |s: &str| {
            if s.contains([' ', '+', '-']) {
                format!("({s})")
            } else {
                s.to_string()
            }
        };
        match self {
            Expr::Affine { a, b } => {
                let lin = if a.is_one() {
                    x.to_string()
                } else if a.is_zero() {
                    String::new()
                } else if a.numer().is_one() {
                    format!("{}/{}", atom(x), a.denom())
                } else {
                    format!("{}*{}", rational::format(a), atom(x))
                };
                match (lin.is_empty(), b.is_zero(), b.is_negative()) {
                    (true, _, _) => rational::format(b),
                    (false, true, _) => lin,
                    (false, false, true) => format!("{lin} - {}", rational::format(&-b)),
                    (false, false, false) => format!("{lin} + {}", rational::format(b)),
                }
            }
            Expr::FloorDiv(k) if k.is_one() => format!("floor({x})"),
            Expr::CeilDiv(k) if k.is_one() => format!("ceil({x})"),
            Expr::FloorDiv(k) => format!("floor({}/{})", atom(x), rational::format(k)),
            Expr::CeilDiv(k) => format!("ceil({}/{})", atom(x), rational::format(k)),
            Expr::Const(c) => rational::format(c),
            Expr::Compose(o, i) => o.render_with(&i.render_with(x)),
        }
    }
}

impl fmt::Display for Expr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.render_with("x"))
    }
}

fn kind_of(integral: bool) -> LineKind {
    if integral {
        LineKind::Naturals
    } else {
        LineKind::Reals
    }
}

enum Rounding {
    Down,
    Up,
}

/// Rounds a real-valued adjoint into the naturals when the adjoint lands there.
fn round_into(raw: Expr, lands_in: LineKind, input_integral: bool, rounding: Rounding) -> Expr {
    if lands_in == LineKind::Reals || raw.is_integral(input_integral) {
        return raw;
    }
    let r = match rounding {
        Rounding::Down => Expr::FloorDiv(Rational::one()),
        Rounding::Up => Expr::CeilDiv(Rational::one()),
    };
    match raw {
        // x/k rounded is a single division
        Expr::Affine { a, b } if b.is_zero() && a.numer().is_one() => {
            let k = Rational::from_integer(a.denom().clone());
            match r {
                Expr::FloorDiv(_) => Expr::FloorDiv(k),
                _ => Expr::CeilDiv(k),
            }
        }
        raw => Expr::compose(r, raw),
    }
}
