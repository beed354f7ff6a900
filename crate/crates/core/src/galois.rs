//! Monotone maps and Galois connections between ordered spaces.
//!
//! A pair `F: C → D`, `G: D → C` is checked two independent ways: directly
//! against `F(c) ⊑ d ⟺ c ≼ G(d)` over every checked `(c, d)`, and through
//! the three conditions (both monotone; `c ≼ GF(c)` and `FG(d) ⊑ d`;
//! `FGF = F` and `GFG = G`). Finite carriers are checked exhaustively,
//! numeric lines on a probe grid refined to the maps' denominators.
//! Equalities are taken up to mutual relation, so preorders behave as their
//! adiabat quotients.

use std::fmt;
use std::sync::Arc;

use num_bigint::BigInt;
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::expr::Expr;
use crate::rational::{self, Rational};
use crate::space::{Space, State};

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Rule {
    /// `table[i]` is the image of source element `i`.
    Table(Vec<usize>),
    Expr(Expr),
}

/// A total map between two spaces, optionally carrying the exponent `a` of
/// its scaling component `λ ↦ λ^a`. Monotonicity is checked, not assumed.
#[derive(Debug, Clone)]
pub struct MonotoneMap {
    source: Arc<Space>,
    target: Arc<Space>,
    rule: Rule,
    scaling_exponent: Option<Rational>,
}

impl MonotoneMap {
    pub fn table(source: Arc<Space>, target: Arc<Space>, table: Vec<usize>) -> Result<Self> {
        let (Some(s), Some(t)) = (source.finite_order(), target.finite_order()) else {
            return Err(Error::ShapeMismatch("table maps need finite source and target".into()));
        };
        if table.len() != s.len() {
            return Err(Error::ShapeMismatch(format!(
                "table has {} entries for {} source elements",
                table.len(),
                s.len()
            )));
        }
        if let Some(bad) = table.iter().find(|&&j| j >= t.len()) {
            return Err(Error::NotTotal(format!("image index {bad} is outside the target")));
        }
        Ok(MonotoneMap { source, target, rule: Rule::Table(table), scaling_exponent: None })
    }

    /// Builds a finite map from `(source label, target label)` pairs covering
    /// every source element exactly once.
    pub fn from_pairs<S: AsRef<str>>(source: Arc<Space>, target: Arc<Space>, pairs: &[(S, S)]) -> Result<Self> {
        let (Some(s), Some(t)) = (source.finite_order(), target.finite_order()) else {
            return Err(Error::ShapeMismatch("table maps need finite source and target".into()));
        };
        let mut table = vec![None; s.len()];
        for (a, b) in pairs {
            let i = s.index_of(a.as_ref())?;
            let j = t.index_of(b.as_ref())?;
            if table[i].replace(j).is_some() {
                return Err(Error::DuplicateState(a.as_ref().to_string()));
            }
        }
        let table = table
            .into_iter()
            .enumerate()
            .map(|(i, j)| j.ok_or_else(|| Error::NotTotal(format!("no image for `{}`", s.label(i)))))
            .collect::<Result<Vec<_>>>()?;
        Self::table(source, target, table)
    }

    pub fn expr(source: Arc<Space>, target: Arc<Space>, expr: Expr) -> Result<Self> {
        if source.line_kind().is_none() || target.line_kind().is_none() {
            return Err(Error::ShapeMismatch("expression maps need numeric lines on both sides".into()));
        }
        expr.validate()?;
        Ok(MonotoneMap { source, target, rule: Rule::Expr(expr), scaling_exponent: None })
    }

    pub fn identity(space: Arc<Space>) -> Self {
        let rule = match space.finite_order() {
            Some(o) => Rule::Table((0..o.len()).collect()),
            None => Rule::Expr(Expr::identity()),
        };
        MonotoneMap { source: space.clone(), target: space, rule, scaling_exponent: None }
    }

    pub fn with_scaling_exponent(mut self, exponent: Rational) -> Self {
        self.scaling_exponent = Some(exponent);
        self
    }

    pub fn source(&self) -> &Arc<Space> {
        &self.source
    }

    pub fn target(&self) -> &Arc<Space> {
        &self.target
    }

    pub fn rule(&self) -> &Rule {
        &self.rule
    }

    pub fn scaling_exponent(&self) -> Option<&Rational> {
        self.scaling_exponent.as_ref()
    }

    /// Image of a state; errors if the state is outside the source or the
    /// image is outside the target.
    pub fn apply(&self, s: &State) -> Result<State> {
        if !self.source.contains(s) {
            return Err(Error::OutsideCarrier(self.source.render(s)));
        }
        let out = match (&self.rule, s) {
            (Rule::Table(t), State::Elem(i)) => State::Elem(t[*i]),
            (Rule::Expr(e), State::Num(x)) => State::Num(e.eval(x)),
            _ => return Err(Error::ShapeMismatch(format!("{s:?} does not fit the map"))),
        };
        if !self.target.contains(&out) {
            return Err(Error::NotTotal(format!(
                "{} ↦ {} is outside the target",
                self.source.render(s),
                self.target.render(&out)
            )));
        }
        Ok(out)
    }

    /// `next ∘ self`.
    pub fn then(&self, next: &MonotoneMap) -> Result<MonotoneMap> {
        if !same_space(&self.target, &next.source) {
            return Err(Error::ShapeMismatch("maps do not compose: middle spaces differ".into()));
        }
        let rule = match (&self.rule, &next.rule) {
            (Rule::Table(a), Rule::Table(b)) => Rule::Table(a.iter().map(|&i| b[i]).collect()),
            (Rule::Expr(a), Rule::Expr(b)) => Rule::Expr(Expr::compose(b.clone(), a.clone())),
            _ => return Err(Error::ShapeMismatch("cannot compose table and expression maps".into())),
        };
        let scaling_exponent = match (&self.scaling_exponent, &next.scaling_exponent) {
            (Some(a), Some(b)) => Some(a * b),
            _ => None,
        };
        Ok(MonotoneMap { source: self.source.clone(), target: next.target.clone(), rule, scaling_exponent })
    }

    fn denominators(&self) -> BigInt {
        match &self.rule {
            Rule::Table(_) => BigInt::one(),
            Rule::Expr(e) => e.denominators(),
        }
    }

    fn scales(&self) -> BigInt {
        match &self.rule {
            Rule::Table(_) => BigInt::one(),
            Rule::Expr(e) => e.scales(),
        }
    }

    pub fn describe(&self) -> String {
        match &self.rule {
            Rule::Expr(e) => e.to_string(),
            Rule::Table(t) => {
                let (s, d) = (self.source.finite_order().unwrap(), self.target.finite_order().unwrap());
                let parts: Vec<String> = t
                    .iter()
                    .enumerate()
                    .map(|(i, &j)| format!("{}↦{}", s.label(i), d.label(j)))
                    .collect();
                format!("{{{}}}", parts.join(", "))
            }
        }
    }

    /// Structural equality of the rule and endpoints.
    pub fn same_as(&self, other: &MonotoneMap) -> bool {
        same_space(&self.source, &other.source) && same_space(&self.target, &other.target) && self.rule == other.rule
    }
}

impl fmt::Display for MonotoneMap {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.describe())
    }
}

fn same_space(a: &Arc<Space>, b: &Arc<Space>) -> bool {
    Arc::ptr_eq(a, b) || a == b
}

fn grid_denominator(maps: &[&MonotoneMap]) -> BigInt {
    maps.iter().fold(BigInt::one(), |acc, m| rational::lcm(&acc, &m.denominators()))
}

/// One checked property with its first counterexample.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Check {
    pub holds: bool,
    pub witness: Option<String>,
}

impl Check {
    fn pass() -> Self {
        Check { holds: true, witness: None }
    }

    fn fail(witness: String) -> Self {
        Check { holds: false, witness: Some(witness) }
    }

    fn note(&mut self, ok: bool, witness: impl FnOnce() -> String) {
        if !ok && self.holds {
            *self = Check::fail(witness());
        }
    }
}

impl fmt::Display for Check {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.witness {
            None if self.holds => f.write_str("holds"),
            None => f.write_str("fails"),
            Some(w) => write!(f, "fails ({w})"),
        }
    }
}

/// `F` monotone: `x ≼ y ⟹ F(x) ⊑ F(y)` over the checked domain.
pub fn check_monotone(map: &MonotoneMap) -> Result<Check> {
    let q = grid_denominator(&[map]);
    let domain = map.source.probe(&q);
    let images = domain.iter().map(|s| map.apply(s)).collect::<Result<Vec<_>>>()?;
    monotone_on(&map.source, &map.target, &domain, &images, "F")
}

fn monotone_on(src: &Space, tgt: &Space, domain: &[State], images: &[State], name: &str) -> Result<Check> {
    for (i, x) in domain.iter().enumerate() {
        for (j, y) in domain.iter().enumerate() {
            if src.leq(x, y)? && !tgt.leq(&images[i], &images[j])? {
                return Ok(Check::fail(format!(
                    "{} ≼ {} but {name}({}) = {} ⋢ {name}({}) = {}",
                    src.render(x),
                    src.render(y),
                    src.render(x),
                    tgt.render(&images[i]),
                    src.render(y),
                    tgt.render(&images[j])
                )));
            }
        }
    }
    Ok(Check::pass())
}

/// Counterexample to the defining biconditional.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DefinitionWitness {
    pub c: String,
    pub d: String,
    /// `F(c) ⊑ d`
    pub left_side: bool,
    /// `c ≼ G(d)`
    pub right_side: bool,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DefinitionReport {
    pub holds: bool,
    pub checked_pairs: usize,
    pub witness: Option<DefinitionWitness>,
}

impl fmt::Display for DefinitionReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.witness {
            None => write!(f, "holds over {} pairs", self.checked_pairs),
            Some(w) => write!(
                f,
                "fails at c = {}, d = {}: F(c) ⊑ d is {}, c ≼ G(d) is {}",
                w.c, w.d, w.left_side, w.right_side
            ),
        }
    }
}

/// The three-condition characterisation.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ConditionReport {
    pub f_monotone: Check,
    pub g_monotone: Check,
    /// `c ≼ GF(c)`
    pub unit: Check,
    /// `FG(d) ⊑ d`
    pub counit: Check,
    pub fgf: Check,
    pub gfg: Check,
}

impl ConditionReport {
    pub fn holds(&self) -> bool {
        self.checks().iter().all(|(_, c)| c.holds)
    }

    pub fn checks(&self) -> [(&'static str, &Check); 6] {
        [
            ("F monotone", &self.f_monotone),
            ("G monotone", &self.g_monotone),
            ("c ≼ GF(c)", &self.unit),
            ("FG(d) ⊑ d", &self.counit),
            ("FGF = F", &self.fgf),
            ("GFG = G", &self.gfg),
        ]
    }

    pub fn first_witness(&self) -> Option<String> {
        self.checks()
            .iter()
            .find(|(_, c)| !c.holds)
            .map(|(name, c)| format!("{name}: {}", c.witness.clone().unwrap_or_default()))
    }
}

impl fmt::Display for ConditionReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (name, c) in self.checks() {
            writeln!(f, "  {name}: {c}")?;
        }
        Ok(())
    }
}

/// A checked pair `F: C → D`, `G: D → C` with both reports.
#[derive(Debug, Clone)]
pub struct Connection {
    left: MonotoneMap,
    right: MonotoneMap,
    pub definition: DefinitionReport,
    pub conditions: ConditionReport,
    /// `S₂(F c) ≤ S₂(d) ⟺ S₁(c) ≤ S₁(G d)` with entropies compared
    /// directly; present when both sides are entropy systems.
    pub entropy_form: Option<Check>,
    grid_denominator: BigInt,
}

impl Connection {
    pub fn left(&self) -> &MonotoneMap {
        &self.left
    }

    pub fn right(&self) -> &MonotoneMap {
        &self.right
    }

    pub fn source(&self) -> &Arc<Space> {
        &self.left.source
    }

    pub fn target(&self) -> &Arc<Space> {
        &self.left.target
    }

    /// Both criteria hold.
    pub fn is_verified(&self) -> bool {
        self.definition.holds && self.conditions.holds()
    }

    pub fn source_domain(&self) -> Vec<State> {
        self.left.source.probe(&self.grid_denominator)
    }

    pub fn target_domain(&self) -> Vec<State> {
        self.left.target.probe(&self.grid_denominator)
    }

    pub fn grid_denominator(&self) -> &BigInt {
        &self.grid_denominator
    }
}

impl fmt::Display for Connection {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "F = {}", self.left)?;
        writeln!(f, "G = {}", self.right)?;
        writeln!(f, "definition (F(c) ⊑ d ⟺ c ≼ G(d)): {}", self.definition)?;
        writeln!(
            f,
            "three conditions: {}",
            if self.conditions.holds() { "hold" } else { "fail" }
        )?;
        write!(f, "{}", self.conditions)?;
        if let Some(e) = &self.entropy_form {
            writeln!(f, "entropy form: {e}")?;
        }
        writeln!(f, "verdict: {}", if self.is_verified() { "F ⊣ G" } else { "not a connection" })
    }
}

/// Runs both adjunction criteria on `F: C → D`, `G: D → C`.
pub fn check_connection(f: &MonotoneMap, g: &MonotoneMap) -> Result<Connection> {
    if !same_space(&f.source, &g.target) || !same_space(&f.target, &g.source) {
        return Err(Error::ShapeMismatch("F: C → D needs G: D → C".into()));
    }
    let (c_space, d_space) = (&*f.source, &*f.target);
    let q = grid_denominator(&[f, g]);
    let cs = c_space.probe(&q);
    let ds = d_space.probe(&q);

    let fc = apply_all(f, &cs)?;
    let gd = apply_all(g, &ds)?;
    let gfc = apply_all(g, &fc)?;
    let fgd = apply_all(f, &gd)?;
    let fgfc = apply_all(f, &gfc)?;
    let gfgd = apply_all(g, &fgd)?;

    let mut definition = DefinitionReport { holds: true, checked_pairs: cs.len() * ds.len(), witness: None };
    'outer: for (i, c) in cs.iter().enumerate() {
        for (j, d) in ds.iter().enumerate() {
            let left_side = d_space.leq(&fc[i], d)?;
            let right_side = c_space.leq(c, &gd[j])?;
            if left_side != right_side {
                definition.holds = false;
                definition.witness = Some(DefinitionWitness {
                    c: c_space.render(c),
                    d: d_space.render(d),
                    left_side,
                    right_side,
                });
                break 'outer;
            }
        }
    }

    let mut unit = Check::pass();
    let mut fgf = Check::pass();
    for (i, c) in cs.iter().enumerate() {
        unit.note(c_space.leq(c, &gfc[i])?, || {
            format!("c = {}, GF(c) = {}", c_space.render(c), c_space.render(&gfc[i]))
        });
        fgf.note(d_space.equiv(&fgfc[i], &fc[i])?, || {
            format!(
                "c = {}, FGF(c) = {}, F(c) = {}",
                c_space.render(c),
                d_space.render(&fgfc[i]),
                d_space.render(&fc[i])
            )
        });
    }
    let mut counit = Check::pass();
    let mut gfg = Check::pass();
    for (j, d) in ds.iter().enumerate() {
        counit.note(d_space.leq(&fgd[j], d)?, || {
            format!("d = {}, FG(d) = {}", d_space.render(d), d_space.render(&fgd[j]))
        });
        gfg.note(c_space.equiv(&gfgd[j], &gd[j])?, || {
            format!(
                "d = {}, GFG(d) = {}, G(d) = {}",
                d_space.render(d),
                c_space.render(&gfgd[j]),
                c_space.render(&gd[j])
            )
        });
    }
    let conditions = ConditionReport {
        f_monotone: monotone_on(c_space, d_space, &cs, &fc, "F")?,
        g_monotone: monotone_on(d_space, c_space, &ds, &gd, "G")?,
        unit,
        counit,
        fgf,
        gfg,
    };

    let entropy_form = match (c_space.as_system(), d_space.as_system()) {
        (Some(s1), Some(s2)) => {
            let mut check = Check::pass();
            'entropy: for (i, c) in cs.iter().enumerate() {
                for (j, d) in ds.iter().enumerate() {
                    let lhs = s2.entropy(&fc[i])? <= s2.entropy(d)?;
                    let rhs = s1.entropy(c)? <= s1.entropy(&gd[j])?;
                    if lhs != rhs {
                        check = Check::fail(format!(
                            "c = {}, d = {}: S₂(Fc) ≤ S₂(d) is {lhs}, S₁(c) ≤ S₁(Gd) is {rhs}",
                            c_space.render(c),
                            d_space.render(d)
                        ));
                        break 'entropy;
                    }
                }
            }
            Some(check)
        }
        _ => None,
    };

    Ok(Connection {
        left: f.clone(),
        right: g.clone(),
        definition,
        conditions,
        entropy_form,
        grid_denominator: q,
    })
}

fn apply_all(map: &MonotoneMap, states: &[State]) -> Result<Vec<State>> {
    states.iter().map(|s| map.apply(s)).collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Side {
    /// Find `G` with `F ⊣ G` for the given `F`.
    RightOf,
    /// Find `F` with `F ⊣ G` for the given `G`.
    LeftOf,
}

/// Residuation: the right adjoint `G(d) = max{c : F(c) ⊑ d}` (or dually the
/// left adjoint `F(c) = min{d : c ≼ G(d)}`).
///
/// `Ok(None)` when some residual set has no greatest (least) element or the
/// candidate fails [`check_connection`]. On numeric lines the adjoint is
/// derived symbolically; cases the rule table cannot decide return
/// `Err(Error::Unsupported)`.
pub fn synthesize_adjoint(map: &MonotoneMap, side: Side) -> Result<Option<MonotoneMap>> {
    if !check_monotone(map)?.holds {
        return Ok(None);
    }
    let candidate = match &map.rule {
        Rule::Table(table) => {
            let src = map.source.finite_order().expect("table source is finite");
            let tgt = map.target.finite_order().expect("table target is finite");
            let mut out = Vec::with_capacity(tgt.len());
            for d in 0..tgt.len() {
                let set: Vec<usize> = match side {
                    Side::RightOf => (0..src.len()).filter(|&c| tgt.leq_idx(table[c], d)).collect(),
                    Side::LeftOf => (0..src.len()).filter(|&c| tgt.leq_idx(d, table[c])).collect(),
                };
                let extreme = set.iter().copied().find(|&g| {
                    set.iter().all(|&c| match side {
                        Side::RightOf => src.leq_idx(c, g),
                        Side::LeftOf => src.leq_idx(g, c),
                    })
                });
                match extreme {
                    Some(g) => out.push(g),
                    None => return Ok(None),
                }
            }
            MonotoneMap::table(map.target.clone(), map.source.clone(), out)?
        }
        Rule::Expr(e) => {
            let sk = map.source.line_kind().expect("expression source is a line");
            let tk = map.target.line_kind().expect("expression target is a line");
            let derived = match side {
                Side::RightOf => e.right_adjoint(sk, tk)?,
                Side::LeftOf => e.left_adjoint(sk, tk)?,
            };
            match derived {
                Some(expr) => MonotoneMap::expr(map.target.clone(), map.source.clone(), expr)?,
                None => return Ok(None),
            }
        }
    };
    let candidate = match (&map.scaling_exponent, side) {
        (Some(a), _) if !a.is_zero() => candidate.with_scaling_exponent(a.recip()),
        _ => candidate,
    };
    let verified = match side {
        Side::RightOf => check_connection(map, &candidate),
        Side::LeftOf => check_connection(&candidate, map),
    };
    match verified {
        Ok(conn) if conn.is_verified() => Ok(Some(candidate)),
        Ok(_) | Err(Error::NotTotal(_)) => Ok(None),
        Err(e) => Err(e),
    }
}

/// `F ⊣ G` on `C ↔ D` and `H ⊣ K` on `D ↔ E` give `HF ⊣ GK` on `C ↔ E`,
/// re-verified from scratch.
pub fn compose_connections(first: &Connection, second: &Connection) -> Result<Connection> {
    if !same_space(first.target(), second.source()) {
        return Err(Error::ShapeMismatch("middle spaces of the connections differ".into()));
    }
    let hf = first.left.then(&second.left)?;
    let gk = second.right.then(&first.right)?;
    check_connection(&hf, &gk)
}

/// Closure `K = GF` on `C` and interior `FG` on `D` with their law reports.
#[derive(Debug, Clone)]
pub struct Operators {
    pub closure: MonotoneMap,
    pub interior: MonotoneMap,
    /// `c ≼ K(c)`
    pub closure_extensive: Check,
    pub closure_monotone: Check,
    pub closure_idempotent: Check,
    /// `FG(d) ⊑ d`
    pub interior_contractive: Check,
    pub interior_monotone: Check,
    pub interior_idempotent: Check,
}

impl Operators {
    pub fn closure_ok(&self) -> bool {
        self.closure_extensive.holds && self.closure_monotone.holds && self.closure_idempotent.holds
    }

    pub fn interior_ok(&self) -> bool {
        self.interior_contractive.holds && self.interior_monotone.holds && self.interior_idempotent.holds
    }
}

impl fmt::Display for Operators {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "closure K = GF = {}", self.closure)?;
        writeln!(f, "  extensive: {}", self.closure_extensive)?;
        writeln!(f, "  monotone: {}", self.closure_monotone)?;
        writeln!(f, "  idempotent: {}", self.closure_idempotent)?;
        writeln!(f, "interior FG = {}", self.interior)?;
        writeln!(f, "  contractive: {}", self.interior_contractive)?;
        writeln!(f, "  monotone: {}", self.interior_monotone)?;
        writeln!(f, "  idempotent: {}", self.interior_idempotent)
    }
}

pub fn derive_operators(conn: &Connection) -> Result<Operators> {
    if !conn.is_verified() {
        return Err(Error::Unverified);
    }
    let closure = conn.left.then(&conn.right)?;
    let interior = conn.right.then(&conn.left)?;
    let (c_space, d_space) = (&**conn.source(), &**conn.target());

    let cs = conn.source_domain();
    let kc = apply_all(&closure, &cs)?;
    let kkc = apply_all(&closure, &kc)?;
    let mut closure_extensive = Check::pass();
    let mut closure_idempotent = Check::pass();
    for (i, c) in cs.iter().enumerate() {
        closure_extensive.note(c_space.leq(c, &kc[i])?, || {
            format!("K({}) = {}", c_space.render(c), c_space.render(&kc[i]))
        });
        closure_idempotent.note(c_space.equiv(&kkc[i], &kc[i])?, || {
            format!("KK({}) = {} ≠ K = {}", c_space.render(c), c_space.render(&kkc[i]), c_space.render(&kc[i]))
        });
    }

    let ds = conn.target_domain();
    let id = apply_all(&interior, &ds)?;
    let iid = apply_all(&interior, &id)?;
    let mut interior_contractive = Check::pass();
    let mut interior_idempotent = Check::pass();
    for (j, d) in ds.iter().enumerate() {
        interior_contractive.note(d_space.leq(&id[j], d)?, || {
            format!("FG({}) = {}", d_space.render(d), d_space.render(&id[j]))
        });
        interior_idempotent.note(d_space.equiv(&iid[j], &id[j])?, || {
            format!("FGFG({}) = {} ≠ FG = {}", d_space.render(d), d_space.render(&iid[j]), d_space.render(&id[j]))
        });
    }

    Ok(Operators {
        closure_monotone: monotone_on(c_space, c_space, &cs, &kc, "K")?,
        interior_monotone: monotone_on(d_space, d_space, &ds, &id, "FG")?,
        closure,
        interior,
        closure_extensive,
        closure_idempotent,
        interior_contractive,
        interior_idempotent,
    })
}

/// The order-isomorphic parts of a connection: `G[D] ⊆ C` and `F[C] ⊆ D`.
#[derive(Debug, Clone)]
pub struct Cores {
    /// `G[D]`, the fixed points of `GF` (on a grid: fixed points within the grid).
    pub source_core: Vec<State>,
    /// `F[C]`, the fixed points of `FG`.
    pub target_core: Vec<State>,
    /// `GF = id` on the source core and `FG = id` on the target core.
    pub mutually_inverse: Check,
    /// `F` restricted to the source core is an order-embedding.
    pub f_embedding: Check,
    /// `G` restricted to the target core is an order-embedding.
    pub g_embedding: Check,
    /// `F` sends the source core into the target core, `G` the other way.
    pub closed: Check,
}

impl Cores {
    pub fn order_isomorphic(&self) -> bool {
        self.mutually_inverse.holds && self.f_embedding.holds && self.g_embedding.holds && self.closed.holds
    }
}

pub fn extract_cores(conn: &Connection) -> Result<Cores> {
    if !conn.is_verified() {
        return Err(Error::Unverified);
    }
    let (f, g) = (&conn.left, &conn.right);
    let (c_space, d_space) = (&**conn.source(), &**conn.target());
    let cs = conn.source_domain();
    let ds = conn.target_domain();

    let (source_core, target_core) = if c_space.is_finite() && d_space.is_finite() {
        (image(g, &ds)?, image(f, &cs)?)
    } else {
        let mut sc = Vec::new();
        for c in &cs {
            if c_space.equiv(&g.apply(&f.apply(c)?)?, c)? {
                sc.push(c.clone());
            }
        }
        let mut tc = Vec::new();
        for d in &ds {
            if d_space.equiv(&f.apply(&g.apply(d)?)?, d)? {
                tc.push(d.clone());
            }
        }
        (sc, tc)
    };

    let mut mutually_inverse = Check::pass();
    let mut closed = Check::pass();
    for c in &source_core {
        let fc = f.apply(c)?;
        let back = g.apply(&fc)?;
        mutually_inverse.note(c_space.equiv(&back, c)?, || {
            format!("GF({}) = {}", c_space.render(c), c_space.render(&back))
        });
        let fixed = d_space.equiv(&f.apply(&g.apply(&fc)?)?, &fc)?;
        closed.note(fixed, || format!("F({}) = {} is not in the target core", c_space.render(c), d_space.render(&fc)));
    }
    for d in &target_core {
        let gd = g.apply(d)?;
        let back = f.apply(&gd)?;
        mutually_inverse.note(d_space.equiv(&back, d)?, || {
            format!("FG({}) = {}", d_space.render(d), d_space.render(&back))
        });
        let fixed = c_space.equiv(&g.apply(&f.apply(&gd)?)?, &gd)?;
        closed.note(fixed, || format!("G({}) = {} is not in the source core", d_space.render(d), c_space.render(&gd)));
    }

    Ok(Cores {
        f_embedding: embedding_on(f, &source_core)?,
        g_embedding: embedding_on(g, &target_core)?,
        source_core,
        target_core,
        mutually_inverse,
        closed,
    })
}

/// Image of `states` under `map`, one representative per class, in first-seen order.
fn image(map: &MonotoneMap, states: &[State]) -> Result<Vec<State>> {
    let mut out: Vec<State> = Vec::new();
    for s in states {
        let y = map.apply(s)?;
        let mut seen = false;
        for o in &out {
            if map.target.equiv(o, &y)? {
                seen = true;
                break;
            }
        }
        if !seen {
            out.push(y);
        }
    }
    Ok(out)
}

fn embedding_on(map: &MonotoneMap, states: &[State]) -> Result<Check> {
    let images = apply_all(map, states)?;
    for (i, x) in states.iter().enumerate() {
        for (j, y) in states.iter().enumerate() {
            let before = map.source.leq(x, y)?;
            let after = map.target.leq(&images[i], &images[j])?;
            if before != after {
                return Ok(Check::fail(format!(
                    "{} ≼ {} is {before} but the images give {after}",
                    map.source.render(x),
                    map.source.render(y)
                )));
            }
        }
    }
    Ok(Check::pass())
}

/// How strong a map is, and (given its partner) which round trips are identities.
#[derive(Debug, Clone)]
pub struct StrengthReport {
    pub monotone: Check,
    pub order_embedding: Check,
    pub order_isomorphism: Check,
    pub injective: Check,
    pub surjective: Check,
    /// `G∘F = id` on the source, if a partner was given.
    pub gf_identity: Option<Check>,
    /// `F∘G = id` on the target, if a partner was given.
    pub fg_identity: Option<Check>,
}

impl fmt::Display for StrengthReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "monotone: {}", self.monotone)?;
        writeln!(f, "order-embedding: {}", self.order_embedding)?;
        writeln!(f, "order-isomorphism: {}", self.order_isomorphism)?;
        writeln!(f, "injective: {}", self.injective)?;
        writeln!(f, "surjective: {}", self.surjective)?;
        if let Some(c) = &self.gf_identity {
            writeln!(f, "GF = id: {c}")?;
        }
        if let Some(c) = &self.fg_identity {
            writeln!(f, "FG = id: {c}")?;
        }
        Ok(())
    }
}

/// Upper bound on how far a source grid is stretched when searching for
/// preimages of target grid points.
const MAX_PREIMAGE_STRETCH: u32 = 1024;

/// Classifies `map`; with a `partner` (`G` for `F ⊣ G`) also reports
/// whether `GF` and `FG` are identities. Surjectivity on numeric lines is
/// decided by searching a refined source grid stretched until the image
/// covers the target grid.
pub fn classify_map_strength(map: &MonotoneMap, partner: Option<&MonotoneMap>) -> Result<StrengthReport> {
    let mut maps = vec![map];
    if let Some(p) = partner {
        if !same_space(&p.source, &map.target) || !same_space(&p.target, &map.source) {
            return Err(Error::ShapeMismatch("partner must map the target back to the source".into()));
        }
        maps.push(p);
    }
    let q = grid_denominator(&maps);
    let (src, tgt) = (&*map.source, &*map.target);
    let domain = src.probe(&q);
    let images = apply_all(map, &domain)?;

    let monotone = monotone_on(src, tgt, &domain, &images, "F")?;
    let order_embedding = embedding_on(map, &domain)?;

    let mut injective = Check::pass();
    for (i, x) in domain.iter().enumerate() {
        for (j, y) in domain.iter().enumerate().skip(i + 1) {
            if tgt.equiv(&images[i], &images[j])? && !src.equiv(x, y)? {
                injective = Check::fail(format!(
                    "F({}) = F({}) = {}",
                    src.render(x),
                    src.render(y),
                    tgt.render(&images[i])
                ));
                break;
            }
        }
        if !injective.holds {
            break;
        }
    }

    let targets = tgt.probe(&q);
    let pool = preimage_pool(map, &q, &targets)?;
    let pool_images = apply_all(map, &pool)?;
    let mut surjective = Check::pass();
    for d in &targets {
        let mut hit = false;
        for y in &pool_images {
            if tgt.equiv(y, d)? {
                hit = true;
                break;
            }
        }
        if !hit {
            surjective = Check::fail(format!("{} has no preimage", tgt.render(d)));
            break;
        }
    }

    let order_isomorphism = match (&order_embedding.holds, &surjective.holds) {
        (true, true) => Check::pass(),
        (false, _) => Check::fail(format!("not an order-embedding: {}", order_embedding.witness.clone().unwrap_or_default())),
        (true, false) => Check::fail(format!("not surjective: {}", surjective.witness.clone().unwrap_or_default())),
    };

    let (gf_identity, fg_identity) = match partner {
        None => (None, None),
        Some(g) => {
            let mut gf = Check::pass();
            for (i, c) in domain.iter().enumerate() {
                let back = g.apply(&images[i])?;
                gf.note(src.equiv(&back, c)?, || format!("GF({}) = {}", src.render(c), src.render(&back)));
            }
            let mut fg = Check::pass();
            for d in &targets {
                let back = map.apply(&g.apply(d)?)?;
                fg.note(tgt.equiv(&back, d)?, || format!("FG({}) = {}", tgt.render(d), tgt.render(&back)));
            }
            (Some(gf), Some(fg))
        }
    };

    Ok(StrengthReport {
        monotone,
        order_embedding,
        order_isomorphism,
        injective,
        surjective,
        gf_identity,
        fg_identity,
    })
}

fn preimage_pool(map: &MonotoneMap, q: &BigInt, targets: &[State]) -> Result<Vec<State>> {
    let src = &*map.source;
    let Some(kind) = src.line_kind() else {
        return Ok(src.probe(q));
    };
    let line = src.as_system().and_then(|s| s.line()).expect("line source");
    let top = targets
        .iter()
        .filter_map(|s| s.as_num().cloned())
        .max()
        .unwrap_or_else(Rational::zero);
    let refine = rational::lcm(q, &map.scales());
    let base = line.grid_n().max(1);
    let mut n = base;
    loop {
        let edge = State::Num(Rational::from_integer(BigInt::from(n)));
        let reached = map.apply(&edge)?.as_num().map(|y| *y >= top).unwrap_or(true);
        if reached || n >= base.saturating_mul(MAX_PREIMAGE_STRETCH) {
            break;
        }
        n = n.saturating_mul(2);
    }
    let wide = crate::poset::NumericLine::new(kind, n);
    Ok(wide.probe_grid(&refine).into_iter().map(State::Num).collect())
}

/// Result of [`check_scaled_connection`].
#[derive(Debug, Clone)]
pub struct ScaledReport {
    pub exponent_product_ok: bool,
    pub connection_verified: bool,
    /// `F(λ·x) = φ(λ)·F(x)` with `φ(λ) = λ^a`.
    pub f_compatible: Check,
    /// `G(μ·y) = ψ(μ)·G(y)` with `ψ(μ) = μ^b`, probed at `μ = φ(λ)`.
    pub g_compatible: Check,
}

impl ScaledReport {
    pub fn passes(&self) -> bool {
        self.exponent_product_ok && self.connection_verified && self.f_compatible.holds && self.g_compatible.holds
    }
}

impl fmt::Display for ScaledReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "exponent product a·b = 1: {}", self.exponent_product_ok)?;
        writeln!(f, "underlying connection verified: {}", self.connection_verified)?;
        writeln!(f, "F(λx) = φ(λ)F(x): {}", self.f_compatible)?;
        writeln!(f, "G(μy) = ψ(μ)G(y): {}", self.g_compatible)
    }
}

/// Checks a connection of spaces with scaling: `F` carries `φ(λ) = λ^a`,
/// `G` carries `ψ(λ) = λ^b`; it passes iff `a·b = 1`, `F ⊣ G`, and both maps
/// commute with the actions on the probe factors.
pub fn check_scaled_connection(f: &MonotoneMap, g: &MonotoneMap, probes: &[Rational]) -> Result<ScaledReport> {
    let a = f
        .scaling_exponent
        .clone()
        .ok_or_else(|| Error::Invalid("F has no scaling exponent".into()))?;
    let b = g
        .scaling_exponent
        .clone()
        .ok_or_else(|| Error::Invalid("G has no scaling exponent".into()))?;
    if a.is_zero() || b.is_zero() {
        return Err(Error::Invalid("scaling exponents must be nonzero".into()));
    }
    let conn = check_connection(f, g)?;
    let q = conn.grid_denominator.clone();
    let f_compatible = compatible(f, &a, probes, &q)?;
    let mu: Vec<Rational> = probes.iter().filter_map(|l| rational::pow(l, &a)).collect();
    let g_compatible = compatible(g, &b, &mu, &q)?;
    Ok(ScaledReport {
        exponent_product_ok: (&a * &b).is_one(),
        connection_verified: conn.is_verified(),
        f_compatible,
        g_compatible,
    })
}

fn compatible(map: &MonotoneMap, exponent: &Rational, probes: &[Rational], q: &BigInt) -> Result<Check> {
    let (src, tgt) = (
        map.source.as_system().ok_or_else(|| Error::Unsupported("scaling needs entropy systems".into()))?,
        map.target.as_system().ok_or_else(|| Error::Unsupported("scaling needs entropy systems".into()))?,
    );
    let mut check = Check::pass();
    for lambda in probes {
        let Some(phi) = rational::pow(lambda, exponent) else {
            check.note(false, || {
                format!("{}^{} is irrational", rational::display(lambda), rational::format(exponent))
            });
            continue;
        };
        for x in map.source.probe(q) {
            let Some(scaled) = src.scale_state(&x, lambda)? else { continue };
            let lhs = map.apply(&scaled)?;
            let fx = map.apply(&x)?;
            match tgt.scale_state(&fx, &phi)? {
                Some(rhs) => check.note(map.target.equiv(&lhs, &rhs)?, || {
                    format!(
                        "λ = {}, x = {}: F(λx) = {} but φ(λ)F(x) = {}",
                        rational::display(lambda),
                        src.render(&x),
                        tgt.render(&lhs),
                        tgt.render(&rhs)
                    )
                }),
                None => check.note(false, || {
                    format!(
                        "λ = {}, x = {}: φ(λ)·F(x) is undefined",
                        rational::display(lambda),
                        src.render(&x)
                    )
                }),
            }
        }
    }
    Ok(check)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::entropy::{EntropySystem, LineEntropy};
    use crate::poset::{FiniteOrder, LineKind};
    use crate::rational::{int, ratio};

    fn line(kind: LineKind) -> Arc<Space> {
        Arc::new(EntropySystem::numeric_line(kind, LineEntropy::Identity, 30).into())
    }

    fn case1() -> (MonotoneMap, MonotoneMap) {
        let (r, n) = (line(LineKind::Reals), line(LineKind::Naturals));
        let f = MonotoneMap::expr(r.clone(), n.clone(), Expr::CeilDiv(int(3))).unwrap();
        let g = MonotoneMap::expr(n, r, Expr::scale(int(3))).unwrap();
        (f, g)
    }

    fn chain(n: usize) -> Arc<Space> {
        Arc::new(FiniteOrder::chain(n).into())
    }

    #[test]
    fn ceiling_third_and_triple_form_a_connection() {
        let (f, g) = case1();
        let conn = check_connection(&f, &g).unwrap();
        assert!(conn.definition.holds);
        assert!(conn.conditions.holds());
        assert_eq!(conn.entropy_form.as_ref().map(|c| c.holds), Some(true));
        assert!(conn.is_verified());
    }

    #[test]
    fn wrong_partner_fails_both_ways() {
        let (f, _) = case1();
        let g = MonotoneMap::expr(f.target().clone(), f.source().clone(), Expr::scale(int(2))).unwrap();
        let conn = check_connection(&f, &g).unwrap();
        assert!(!conn.definition.holds);
        assert!(!conn.conditions.holds());
        assert!(conn.definition.witness.is_some());
        assert!(conn.conditions.first_witness().is_some());
    }

    #[test]
    fn identity_connection() {
        let sp = chain(3);
        let id = MonotoneMap::identity(sp);
        assert!(check_connection(&id, &id).unwrap().is_verified());
    }

    #[test]
    fn shape_mismatch_is_an_error() {
        let id3 = MonotoneMap::identity(chain(3));
        let id2 = MonotoneMap::identity(chain(2));
        assert!(matches!(check_connection(&id3, &id2), Err(Error::ShapeMismatch(_))));
    }

    #[test]
    fn swapped_chain_is_not_monotone() {
        let c = chain(3);
        let f = MonotoneMap::table(c.clone(), c, vec![2, 1, 0]).unwrap();
        let m = check_monotone(&f).unwrap();
        assert!(!m.holds);
        assert!(m.witness.is_some());
    }

    #[test]
    fn constant_map_is_monotone() {
        let (r, n) = (line(LineKind::Reals), line(LineKind::Naturals));
        let f = MonotoneMap::expr(r, n, Expr::Const(int(4))).unwrap();
        assert!(check_monotone(&f).unwrap().holds);
    }

    #[test]
    fn chain_adjoint_and_cores() {
        let (c3, c2) = (chain(3), chain(2));
        let f = MonotoneMap::table(c3, c2, vec![0, 0, 1]).unwrap();
        let g = synthesize_adjoint(&f, Side::RightOf).unwrap().unwrap();
        assert_eq!(g.rule(), &Rule::Table(vec![1, 2]));
        let conn = check_connection(&f, &g).unwrap();
        let cores = extract_cores(&conn).unwrap();
        assert_eq!(cores.source_core, vec![State::Elem(1), State::Elem(2)]);
        assert_eq!(cores.target_core, vec![State::Elem(0), State::Elem(1)]);
        assert!(cores.order_isomorphic());
    }

    #[test]
    fn v_shape_has_no_right_adjoint() {
        let v: Arc<Space> = Arc::new(FiniteOrder::build(&["a", "b", "t"], &[("a", "t"), ("b", "t")]).unwrap().into());
        let f = MonotoneMap::from_pairs(v, chain(2), &[("a", "0"), ("b", "0"), ("t", "1")]).unwrap();
        assert!(synthesize_adjoint(&f, Side::RightOf).unwrap().is_none());
    }

    #[test]
    fn synthesized_line_adjoint_matches_triple() {
        let (f, g) = case1();
        let s = synthesize_adjoint(&f, Side::RightOf).unwrap().unwrap();
        for d in f.target().probe(&BigInt::one()) {
            assert_eq!(s.apply(&d).unwrap(), g.apply(&d).unwrap());
        }
    }

    #[test]
    fn composition_of_doubling_and_tripling() {
        let n = line(LineKind::Naturals);
        let conn = |k: i64| {
            let f = MonotoneMap::expr(n.clone(), n.clone(), Expr::scale(int(k))).unwrap();
            let g = MonotoneMap::expr(n.clone(), n.clone(), Expr::FloorDiv(int(k))).unwrap();
            check_connection(&f, &g).unwrap()
        };
        let (c2, c3) = (conn(2), conn(3));
        assert!(c2.is_verified() && c3.is_verified());
        let c6 = compose_connections(&c2, &c3).unwrap();
        assert!(c6.is_verified());
        for x in n.probe(&BigInt::one()) {
            let v = c6.right().apply(&x).unwrap();
            let expect = rational::floor(&(x.as_num().unwrap() / int(6)));
            assert_eq!(v, State::Num(expect));
        }
    }

    #[test]
    fn closure_of_case1() {
        let (f, g) = case1();
        let ops = derive_operators(&check_connection(&f, &g).unwrap()).unwrap();
        assert!(ops.closure_ok() && ops.interior_ok());
        assert_eq!(ops.closure.apply(&State::Num(int(1))).unwrap(), State::Num(int(3)));
        assert_eq!(ops.closure.apply(&State::Num(int(3))).unwrap(), State::Num(int(3)));
        for y in f.target().probe(&BigInt::one()) {
            assert_eq!(ops.interior.apply(&y).unwrap(), y);
        }
    }

    #[test]
    fn unverified_connection_has_no_operators() {
        let (f, _) = case1();
        let g = MonotoneMap::expr(f.target().clone(), f.source().clone(), Expr::scale(int(2))).unwrap();
        let conn = check_connection(&f, &g).unwrap();
        assert!(matches!(derive_operators(&conn), Err(Error::Unverified)));
        assert!(matches!(extract_cores(&conn), Err(Error::Unverified)));
    }

    #[test]
    fn case1_cores() {
        let (f, g) = case1();
        let cores = extract_cores(&check_connection(&f, &g).unwrap()).unwrap();
        let expect: Vec<State> = (0..=10).map(|k| State::Num(int(3 * k))).collect();
        assert_eq!(cores.source_core, expect);
        let naturals: Vec<State> = (0..=30).map(|k| State::Num(int(k))).collect();
        assert_eq!(cores.target_core, naturals);
        assert!(cores.order_isomorphic());
    }

    #[test]
    fn strength_of_case1_maps() {
        let (f, g) = case1();
        let sf = classify_map_strength(&f, Some(&g)).unwrap();
        assert!(sf.monotone.holds && sf.surjective.holds);
        assert!(!sf.injective.holds && !sf.order_embedding.holds);
        let sg = classify_map_strength(&g, Some(&f)).unwrap();
        assert!(sg.injective.holds && sg.order_embedding.holds);
        assert!(!sg.surjective.holds);
        assert!(!sg.order_isomorphism.holds);
        let id = classify_map_strength(&MonotoneMap::identity(chain(4)), None).unwrap();
        assert!(id.order_isomorphism.holds);
    }

    #[test]
    fn non_injective_witness_names_merged_points() {
        let (f, _) = case1();
        let s = classify_map_strength(&f, None).unwrap();
        assert_eq!(s.injective.witness.as_deref(), Some("F(1/3) = F(2/3) = 1"));
    }

    fn squares() -> (Arc<Space>, Arc<Space>) {
        let v1: Vec<Rational> = [1, 2, 4].iter().map(|&k| int(k)).collect();
        let v2: Vec<Rational> = v1.iter().map(|v| v * v).collect();
        let lambdas = [ratio(1, 2), int(1), int(2)];
        let mk = |vals: &[Rational], lam: &[Rational]| {
            let labels = vals.iter().map(rational::format).collect();
            let sys = EntropySystem::from_values(labels, vals.to_vec()).unwrap();
            let table = sys.extensive_table(lam).unwrap();
            Arc::new(Space::from(sys.with_scaling(table).unwrap()))
        };
        let mu: Vec<Rational> = lambdas.iter().map(|l| l * l).collect();
        (mk(&v1, &lambdas), mk(&v2, &mu))
    }

    #[test]
    fn squaring_scaled_connection() {
        let (g1, g2) = squares();
        let f = MonotoneMap::table(g1.clone(), g2.clone(), vec![0, 1, 2]).unwrap().with_scaling_exponent(int(2));
        let g = MonotoneMap::table(g2, g1, vec![0, 1, 2]).unwrap().with_scaling_exponent(ratio(1, 2));
        let probes = [ratio(1, 2), int(1), int(2)];
        let report = check_scaled_connection(&f, &g, &probes).unwrap();
        assert!(report.passes(), "{report}");
        let g3 = g.clone().with_scaling_exponent(int(3));
        let bad = check_scaled_connection(&f, &g3, &probes).unwrap();
        assert!(!bad.exponent_product_ok && !bad.passes());
        let g0 = g.with_scaling_exponent(Rational::zero());
        assert!(check_scaled_connection(&f, &g0, &probes).is_err());
    }
}
