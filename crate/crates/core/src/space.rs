//! The carriers that maps and connections run over: plain finite orders
//! and entropy systems (finite or numeric line).

use num_bigint::BigInt;

use crate::entropy::EntropySystem;
use crate::error::{Error, Result};
use crate::poset::{FiniteOrder, LineKind};
use crate::rational::{self, Rational};

/// A point of a [`Space`]: an element index for finite carriers, an exact
/// rational for numeric lines.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum State {
    Elem(usize),
    Num(Rational),
}

impl State {
    pub fn num(q: Rational) -> Self {
        State::Num(q)
    }

    pub fn as_elem(&self) -> Option<usize> {
        match self {
            State::Elem(i) => Some(*i),
            State::Num(_) => None,
        }
    }

    pub fn as_num(&self) -> Option<&Rational> {
        match self {
            State::Num(q) => Some(q),
            State::Elem(_) => None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Space {
    Order(FiniteOrder),
    System(EntropySystem),
}

impl From<FiniteOrder> for Space {
    fn from(o: FiniteOrder) -> Self {
        Space::Order(o)
    }
}

impl From<EntropySystem> for Space {
    fn from(s: EntropySystem) -> Self {
        Space::System(s)
    }
}

impl Space {
    pub fn as_system(&self) -> Option<&EntropySystem> {
        match self {
            Space::System(s) => Some(s),
            Space::Order(_) => None,
        }
    }

    /// The finite order underneath, if the carrier is finite.
    pub fn finite_order(&self) -> Option<&FiniteOrder> {
        match self {
            Space::Order(o) => Some(o),
            Space::System(s) => s.finite_order(),
        }
    }

    pub fn line_kind(&self) -> Option<LineKind> {
        match self {
            Space::Order(_) => None,
            Space::System(s) => s.line().map(|l| l.kind()),
        }
    }

    pub fn is_finite(&self) -> bool {
        self.finite_order().is_some()
    }

    pub fn contains(&self, s: &State) -> bool {
        match (self, s) {
            (Space::Order(o), State::Elem(i)) => *i < o.len(),
            (Space::System(sys), s) => sys.contains(s),
            _ => false,
        }
    }

    pub fn leq(&self, a: &State, b: &State) -> Result<bool> {
        match self {
            Space::Order(o) => match (a, b) {
                (State::Elem(i), State::Elem(j)) if *i < o.len() && *j < o.len() => Ok(o.leq_idx(*i, *j)),
                _ => Err(Error::OutsideCarrier(format!("{a:?} or {b:?}"))),
            },
            Space::System(s) => s.leq(a, b),
        }
    }

    /// Mutual relation; equality on posets, same adiabat on preorders.
    pub fn equiv(&self, a: &State, b: &State) -> Result<bool> {
        Ok(self.leq(a, b)? && self.leq(b, a)?)
    }

    /// Every element of a finite carrier, or the probe grid with the given
    /// denominator on a numeric line.
    pub fn probe(&self, denominator: &BigInt) -> Vec<State> {
        match self {
            Space::Order(o) => (0..o.len()).map(State::Elem).collect(),
            Space::System(s) => s.probe(denominator),
        }
    }

    pub fn render(&self, s: &State) -> String {
        match (self.finite_order(), s) {
            (Some(o), State::Elem(i)) if *i < o.len() => o.label(*i).to_string(),
            (_, State::Num(q)) => rational::display(q),
            (_, State::Elem(i)) => format!("#{i}"),
        }
    }

    /// Parses a label (finite carriers) or a rational (numeric lines).
    pub fn parse_state(&self, text: &str) -> Result<State> {
        let state = match self.finite_order() {
            Some(o) => State::Elem(o.index_of(text)?),
            None => State::Num(rational::parse(text)?),
        };
        if !self.contains(&state) {
            return Err(Error::OutsideCarrier(text.to_string()));
        }
        Ok(state)
    }

    pub fn describe(&self) -> String {
        match self {
            Space::Order(o) => format!("finite order on {} elements", o.len()),
            Space::System(s) => s.describe(),
        }
    }
}
