//! Entropy systems: a carrier whose order is induced by an exact entropy
//! function, `X ≼ Y ⟺ S(X) ≤ S(Y)`, with optional additive composition and
//! an extensive scaling action.

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Signed};

use crate::error::{Error, Result};
use crate::poset::{FiniteOrder, LineKind, NumericLine, MAX_RELATION_PAIRS};
use crate::rational::{self, Rational};
use crate::space::State;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LineEntropy {
    Identity,
    Floor,
}

impl LineEntropy {
    pub fn parse(descriptor: &str) -> Result<Self> {
        match descriptor {
            "identity" => Ok(LineEntropy::Identity),
            "floor" => Ok(LineEntropy::Floor),
            other => Err(Error::Unsupported(format!("entropy descriptor `{other}`"))),
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            LineEntropy::Identity => "identity",
            LineEntropy::Floor => "floor",
        }
    }
}

/// How positive rationals act on states.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ScalingAction {
    /// `λ·X = X` for every λ.
    Trivial,
    /// `λ·x` pointwise; numeric lines only.
    Pointwise,
    /// Explicit per-λ state maps on a finite carrier; `None` where undefined.
    Table(BTreeMap<Rational, Vec<Option<usize>>>),
}

#[derive(Debug, Clone, PartialEq, Eq)]
enum Carrier {
    Finite { order: FiniteOrder, entropy: Vec<Rational> },
    Line { line: NumericLine, entropy: LineEntropy, factor: Rational },
}

/// Components of an additively composed system.
#[derive(Debug, Clone, PartialEq, Eq)]
struct Parts {
    left: Box<EntropySystem>,
    right: Box<EntropySystem>,
    pairs: Vec<(usize, usize)>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EntropySystem {
    carrier: Carrier,
    scaling: Option<ScalingAction>,
    parts: Option<Parts>,
}

impl EntropySystem {
    /// Finite system with one entropy value per state; the order is induced.
    pub fn from_table<S: AsRef<str>>(states: &[S], entropy: &[(S, Rational)]) -> Result<Self> {
        let labels: Vec<String> = states.iter().map(|s| s.as_ref().to_string()).collect();
        let mut values: Vec<Option<Rational>> = vec![None; labels.len()];
        let position = |name: &str| labels.iter().position(|l| l == name);
        for (i, l) in labels.iter().enumerate() {
            if labels[..i].contains(l) {
                return Err(Error::DuplicateState(l.clone()));
            }
        }
        for (name, value) in entropy {
            let name = name.as_ref();
            let i = position(name).ok_or_else(|| Error::UnknownElement(name.to_string()))?;
            if values[i].replace(value.clone()).is_some() {
                return Err(Error::DuplicateState(name.to_string()));
            }
        }
        let values = values
            .into_iter()
            .zip(&labels)
            .map(|(v, l)| v.ok_or_else(|| Error::MissingEntropy(l.clone())))
            .collect::<Result<Vec<_>>>()?;
        Self::from_values(labels, values)
    }

    /// Finite system from parallel label and entropy vectors.
    pub fn from_values(labels: Vec<String>, entropy: Vec<Rational>) -> Result<Self> {
        if labels.len() != entropy.len() {
            return Err(Error::ShapeMismatch(format!(
                "{} states but {} entropy values",
                labels.len(),
                entropy.len()
            )));
        }
        let rel: Vec<Vec<bool>> = entropy
            .iter()
            .map(|a| entropy.iter().map(|b| a <= b).collect())
            .collect();
        let order = FiniteOrder::from_relation(labels, &rel)?;
        Ok(Self::finite(order, entropy))
    }

    /// A finite system whose order is declared separately from its entropy.
    /// The order must be total (every pair comparable); whether it agrees
    /// with the entropy is left to [`EntropySystem::check_axioms`].
    pub fn with_order(order: FiniteOrder, entropy: Vec<Rational>) -> Result<Self> {
        if order.len() != entropy.len() {
            return Err(Error::ShapeMismatch(format!(
                "{} states but {} entropy values",
                order.len(),
                entropy.len()
            )));
        }
        for i in 0..order.len() {
            for j in 0..order.len() {
                if !order.leq_idx(i, j) && !order.leq_idx(j, i) {
                    return Err(Error::Invalid(format!(
                        "comparison hypothesis violated: {} and {} are incomparable",
                        order.label(i),
                        order.label(j)
                    )));
                }
            }
        }
        Ok(Self::finite(order, entropy))
    }

    fn finite(order: FiniteOrder, entropy: Vec<Rational>) -> Self {
        EntropySystem { carrier: Carrier::Finite { order, entropy }, scaling: None, parts: None }
    }

    /// A numeric line with identity or floor entropy. Lines carry the
    /// pointwise scaling action.
    pub fn numeric_line(kind: LineKind, entropy: LineEntropy, grid_n: u32) -> Self {
        EntropySystem {
            carrier: Carrier::Line {
                line: NumericLine::new(kind, grid_n),
                entropy,
                factor: Rational::one(),
            },
            scaling: Some(ScalingAction::Pointwise),
            parts: None,
        }
    }

    /// Same as [`EntropySystem::numeric_line`] with a textual descriptor.
    pub fn numeric_line_from(kind: LineKind, descriptor: &str, grid_n: u32) -> Result<Self> {
        Ok(Self::numeric_line(kind, LineEntropy::parse(descriptor)?, grid_n))
    }

    pub fn with_scaling(mut self, action: ScalingAction) -> Result<Self> {
        match (&self.carrier, &action) {
            (Carrier::Line { .. }, ScalingAction::Table(_)) => {
                return Err(Error::Invalid("table scaling needs a finite carrier".into()))
            }
            (Carrier::Finite { .. }, ScalingAction::Pointwise) => {
                return Err(Error::Invalid("pointwise scaling needs a numeric line".into()))
            }
            (Carrier::Finite { order, .. }, ScalingAction::Table(table)) => {
                for (lambda, row) in table {
                    if !lambda.is_positive() {
                        return Err(Error::Invalid(format!(
                            "scaling factor {} is not positive",
                            rational::format(lambda)
                        )));
                    }
                    if row.len() != order.len() || row.iter().flatten().any(|&j| j >= order.len()) {
                        return Err(Error::ShapeMismatch(format!(
                            "scaling row for {} does not fit the carrier",
                            rational::format(lambda)
                        )));
                    }
                }
            }
            _ => {}
        }
        self.scaling = Some(action);
        Ok(self)
    }

    /// Builds a table action on a finite system by sending `X` to the first
    /// state whose entropy is `λ·S(X)`, leaving it undefined if none exists.
    pub fn extensive_table(&self, lambdas: &[Rational]) -> Result<ScalingAction> {
        let (_, entropy) = self.finite_parts().ok_or_else(|| {
            Error::Invalid("extensive tables are built on finite carriers".into())
        })?;
        let mut table = BTreeMap::new();
        for lambda in lambdas {
            if !lambda.is_positive() {
                return Err(Error::Invalid(format!(
                    "scaling factor {} is not positive",
                    rational::format(lambda)
                )));
            }
            let row = entropy
                .iter()
                .map(|s| {
                    let want = s * lambda;
                    entropy.iter().position(|t| *t == want)
                })
                .collect();
            table.insert(lambda.clone(), row);
        }
        Ok(ScalingAction::Table(table))
    }

    pub fn scaling(&self) -> Option<&ScalingAction> {
        self.scaling.as_ref()
    }

    pub fn finite_order(&self) -> Option<&FiniteOrder> {
        self.finite_parts().map(|(o, _)| o)
    }

    fn finite_parts(&self) -> Option<(&FiniteOrder, &[Rational])> {
        match &self.carrier {
            Carrier::Finite { order, entropy } => Some((order, entropy)),
            Carrier::Line { .. } => None,
        }
    }

    pub fn line(&self) -> Option<&NumericLine> {
        match &self.carrier {
            Carrier::Line { line, .. } => Some(line),
            Carrier::Finite { .. } => None,
        }
    }

    pub fn line_entropy(&self) -> Option<LineEntropy> {
        match &self.carrier {
            Carrier::Line { entropy, .. } => Some(*entropy),
            Carrier::Finite { .. } => None,
        }
    }

    pub fn is_composite(&self) -> bool {
        self.parts.is_some()
    }

    pub fn contains(&self, s: &State) -> bool {
        match (&self.carrier, s) {
            (Carrier::Finite { order, .. }, State::Elem(i)) => *i < order.len(),
            (Carrier::Line { line, .. }, State::Num(q)) => line.contains(q),
            _ => false,
        }
    }

    pub fn entropy(&self, s: &State) -> Result<Rational> {
        match (&self.carrier, s) {
            (Carrier::Finite { entropy, .. }, State::Elem(i)) if *i < entropy.len() => Ok(entropy[*i].clone()),
            (Carrier::Line { line, entropy, factor }, State::Num(x)) if line.contains(x) => {
                let base = match entropy {
                    LineEntropy::Identity => x.clone(),
                    LineEntropy::Floor => x.floor(),
                };
                Ok(base * factor)
            }
            _ => Err(Error::OutsideCarrier(format!("{s:?}"))),
        }
    }

    /// Entropy of a finite state given by label.
    pub fn entropy_of(&self, label: &str) -> Result<Rational> {
        let order = self
            .finite_order()
            .ok_or_else(|| Error::Invalid("labels only exist on finite carriers".into()))?;
        self.entropy(&State::Elem(order.index_of(label)?))
    }

    pub fn leq(&self, a: &State, b: &State) -> Result<bool> {
        match (&self.carrier, a, b) {
            (Carrier::Finite { order, .. }, State::Elem(i), State::Elem(j))
                if *i < order.len() && *j < order.len() =>
            {
                Ok(order.leq_idx(*i, *j))
            }
            (Carrier::Line { .. }, _, _) => Ok(self.entropy(a)? <= self.entropy(b)?),
            _ => Err(Error::OutsideCarrier(format!("{a:?} or {b:?}"))),
        }
    }

    pub fn probe(&self, denominator: &BigInt) -> Vec<State> {
        match &self.carrier {
            Carrier::Finite { order, .. } => (0..order.len()).map(State::Elem).collect(),
            Carrier::Line { line, .. } => line.probe_grid(denominator).into_iter().map(State::Num).collect(),
        }
    }

    pub fn describe(&self) -> String {
        match &self.carrier {
            Carrier::Finite { order, .. } => format!("finite entropy system on {} states", order.len()),
            Carrier::Line { line, entropy, factor } if factor.is_one() => {
                format!("{} line, S = {}", line.kind().name(), entropy.name())
            }
            Carrier::Line { line, entropy, factor } => format!(
                "{} line, S = {}*{}",
                line.kind().name(),
                rational::format(factor),
                entropy.name()
            ),
        }
    }

    /// Restricts a line to its probe grid as a finite system; finite systems
    /// are returned unchanged.
    pub fn grid_restrict(&self, denominator: &BigInt) -> Result<EntropySystem> {
        if self.line().is_none() {
            return Ok(self.clone());
        }
        let states = self.probe(denominator);
        let labels = states
            .iter()
            .map(|s| rational::format(s.as_num().expect("line state")))
            .collect();
        let values = states.iter().map(|s| self.entropy(s)).collect::<Result<Vec<_>>>()?;
        Self::from_values(labels, values)
    }

    /// Additive composition: carrier is the product, `S(X,Y) = S(X) + S(Y)`,
    /// and the order is re-derived from the sum.
    pub fn compose_additive(&self, other: &EntropySystem) -> Result<EntropySystem> {
        let (o1, s1) = self.finite_parts().ok_or_else(not_finite)?;
        let (o2, s2) = other.finite_parts().ok_or_else(not_finite)?;
        let values: Vec<Rational> = s1
            .iter()
            .flat_map(|a| s2.iter().map(move |b| a + b))
            .collect();
        Self::composite(self, other, o1, o2, values)
    }

    /// A composite over `self × other` with caller-supplied entropies, in
    /// row-major `(i, j)` order. Used to build systems that break additivity.
    pub fn composite_from_values(&self, other: &EntropySystem, values: Vec<Rational>) -> Result<EntropySystem> {
        let (o1, _) = self.finite_parts().ok_or_else(not_finite)?;
        let (o2, _) = other.finite_parts().ok_or_else(not_finite)?;
        Self::composite(self, other, o1, o2, values)
    }

    fn composite(
        left: &EntropySystem,
        right: &EntropySystem,
        o1: &FiniteOrder,
        o2: &FiniteOrder,
        values: Vec<Rational>,
    ) -> Result<EntropySystem> {
        let n = o1.len().saturating_mul(o2.len());
        if n.saturating_mul(n) > MAX_RELATION_PAIRS {
            return Err(Error::SizeCap { pairs: n.saturating_mul(n), cap: MAX_RELATION_PAIRS });
        }
        if values.len() != n {
            return Err(Error::ShapeMismatch(format!("{n} product states but {} values", values.len())));
        }
        let pairs: Vec<(usize, usize)> = (0..o1.len())
            .flat_map(|i| (0..o2.len()).map(move |j| (i, j)))
            .collect();
        let labels = pairs
            .iter()
            .map(|&(i, j)| format!("({},{})", o1.label(i), o2.label(j)))
            .collect();
        let mut sys = Self::from_values(labels, values)?;
        sys.parts = Some(Parts { left: Box::new(left.clone()), right: Box::new(right.clone()), pairs });
        Ok(sys)
    }

    /// The system with every entropy multiplied by `λ`.
    pub fn scale_extensive(&self, lambda: &Rational) -> Result<EntropySystem> {
        positive(lambda)?;
        let mut out = self.clone();
        match &mut out.carrier {
            Carrier::Finite { entropy, .. } => {
                for s in entropy.iter_mut() {
                    *s = &*s * lambda;
                }
            }
            Carrier::Line { factor, .. } => *factor = &*factor * lambda,
        }
        out.parts = None;
        Ok(out)
    }

    /// `λ·X` under the system's scaling action. `Ok(None)` when the action
    /// leaves `X` undefined (partial tables, or `λx` not a natural number).
    pub fn scale_state(&self, s: &State, lambda: &Rational) -> Result<Option<State>> {
        positive(lambda)?;
        if !self.contains(s) {
            return Err(Error::OutsideCarrier(format!("{s:?}")));
        }
        match self.scaling.as_ref() {
            None => Err(Error::Unsupported("system has no scaling action".into())),
            Some(ScalingAction::Trivial) => Ok(Some(s.clone())),
            Some(ScalingAction::Pointwise) => {
                let x = s.as_num().expect("pointwise scaling lives on lines");
                let y = State::Num(x * lambda);
                Ok(self.contains(&y).then_some(y))
            }
            Some(ScalingAction::Table(table)) => {
                if lambda.is_one() {
                    return Ok(Some(s.clone()));
                }
                let i = s.as_elem().expect("table scaling lives on finite carriers");
                Ok(table.get(lambda).and_then(|row| row[i]).map(State::Elem))
            }
        }
    }

    /// Checks monotonicity (both directions), additivity and extensivity.
    pub fn check_axioms(&self, probe_lambdas: &[Rational]) -> AxiomReport {
        let mut report = AxiomReport {
            monotonicity_ok: true,
            additivity_ok: true,
            extensivity_ok: true,
            extensivity_applicable: self.scaling.is_some(),
            witnesses: Vec::new(),
        };
        let q = axiom_grid_denominator(probe_lambdas);
        let states = self.probe(&q);

        for a in &states {
            for b in &states {
                let ordered = self.leq(a, b).expect("probe states are in the carrier");
                let by_entropy = self.entropy(a).unwrap() <= self.entropy(b).unwrap();
                if ordered != by_entropy {
                    report.monotonicity_ok = false;
                    report.witnesses.push(Witness::new(
                        Axiom::Monotonicity,
                        format!(
                            "{} ≼ {} is {ordered} but S-order is {by_entropy}",
                            self.render(a),
                            self.render(b)
                        ),
                    ));
                }
            }
        }

        self.check_additivity(&mut report);

        if self.scaling.is_some() {
            for lambda in probe_lambdas {
                for x in &states {
                    let scaled = match self.scale_state(x, lambda) {
                        Ok(Some(y)) => y,
                        Ok(None) => continue,
                        Err(e) => {
                            report.extensivity_ok = false;
                            report.witnesses.push(Witness::new(Axiom::Extensivity, e.to_string()));
                            continue;
                        }
                    };
                    let lhs = self.entropy(&scaled).unwrap();
                    let rhs = self.entropy(x).unwrap() * lambda;
                    if lhs != rhs {
                        report.extensivity_ok = false;
                        report.witnesses.push(Witness::new(
                            Axiom::Extensivity,
                            format!(
                                "S({}·{}) = {} but {}·S = {}",
                                rational::display(lambda),
                                self.render(x),
                                rational::display(&lhs),
                                rational::display(lambda),
                                rational::display(&rhs)
                            ),
                        ));
                    }
                }
            }
        }
        report
    }

    fn check_additivity(&self, report: &mut AxiomReport) {
        let mut check = |label: String, composite: Rational, sum: Rational| {
            if composite != sum {
                report.additivity_ok = false;
                report.witnesses.push(Witness::new(
                    Axiom::Additivity,
                    format!(
                        "S{label} = {} but the component sum is {}",
                        rational::display(&composite),
                        rational::display(&sum)
                    ),
                ));
            }
        };
        if let Some(parts) = &self.parts {
            for (k, &(i, j)) in parts.pairs.iter().enumerate() {
                let composite = self.entropy(&State::Elem(k)).unwrap();
                let sum = parts.left.entropy(&State::Elem(i)).unwrap()
                    + parts.right.entropy(&State::Elem(j)).unwrap();
                check(self.render(&State::Elem(k)), composite, sum);
            }
            return;
        }
        // Self-composition of a small sample: the first grid states paired with each other.
        let base = match self.line() {
            Some(_) => match self.grid_restrict(&BigInt::one()) {
                Ok(b) => b,
                Err(_) => return,
            },
            None => self.clone(),
        };
        let Some((order, _)) = base.finite_parts() else { return };
        let keep = order.len().min(8);
        let labels: Vec<String> = (0..keep).map(|i| order.label(i).to_string()).collect();
        let values: Vec<Rational> = (0..keep).map(|i| base.entropy(&State::Elem(i)).unwrap()).collect();
        let Ok(small) = EntropySystem::from_values(labels, values) else { return };
        let Ok(pair) = small.compose_additive(&small) else { return };
        for i in 0..keep {
            for j in 0..keep {
                let k = State::Elem(i * keep + j);
                let composite = pair.entropy(&k).unwrap();
                let sum = small.entropy(&State::Elem(i)).unwrap() + small.entropy(&State::Elem(j)).unwrap();
                check(pair.render(&k), composite, sum);
            }
        }
    }

    pub fn render(&self, s: &State) -> String {
        match (&self.carrier, s) {
            (Carrier::Finite { order, .. }, State::Elem(i)) if *i < order.len() => order.label(*i).to_string(),
            (_, State::Num(q)) => rational::display(q),
            (_, State::Elem(i)) => format!("#{i}"),
        }
    }
}

fn not_finite() -> Error {
    Error::Invalid("composition needs finite (or grid-restricted) systems".into())
}

fn positive(lambda: &Rational) -> Result<()> {
    if lambda.is_positive() {
        Ok(())
    } else {
        Err(Error::Invalid(format!("scaling factor {} is not positive", rational::format(lambda))))
    }
}

fn axiom_grid_denominator(lambdas: &[Rational]) -> BigInt {
    lambdas
        .iter()
        .fold(BigInt::from(2), |acc, l| rational::lcm(&acc, l.denom()))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Axiom {
    Monotonicity,
    Additivity,
    Extensivity,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Witness {
    pub axiom: Axiom,
    pub detail: String,
}

impl Witness {
    fn new(axiom: Axiom, detail: String) -> Self {
        Witness { axiom, detail }
    }
}

/// Outcome of [`EntropySystem::check_axioms`]. A false flag always comes
/// with at least one witness of that axiom.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AxiomReport {
    pub monotonicity_ok: bool,
    pub additivity_ok: bool,
    pub extensivity_ok: bool,
    /// False when the system has no scaling action; extensivity is then vacuous.
    pub extensivity_applicable: bool,
    pub witnesses: Vec<Witness>,
}

impl AxiomReport {
    pub fn all_ok(&self) -> bool {
        self.monotonicity_ok && self.additivity_ok && self.extensivity_ok
    }
}

impl fmt::Display for AxiomReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "monotonicity: {}", ok(self.monotonicity_ok))?;
        writeln!(f, "additivity: {}", ok(self.additivity_ok))?;
        if self.extensivity_applicable {
            writeln!(f, "extensivity: {}", ok(self.extensivity_ok))?;
        } else {
            writeln!(f, "extensivity: n/a (no scaling action)")?;
        }
        for w in &self.witnesses {
            writeln!(f, "  {:?}: {}", w.axiom, w.detail)?;
        }
        Ok(())
    }
}

fn ok(b: bool) -> &'static str {
    if b {
        "ok"
    } else {
        "FAILS"
    }
}
