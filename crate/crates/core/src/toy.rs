//! The three worked toy connections between the nonnegative reals and the
//! naturals (both with entropy `S(x) = x`), with their example processes.

use std::fmt::Write as _;
use std::sync::Arc;

use crate::entropy::{EntropySystem, LineEntropy};
use crate::error::Result;
use crate::expr::Expr;
use crate::galois::{check_connection, Connection, MonotoneMap};
use crate::poset::LineKind;
use crate::rational::int;
use crate::space::Space;
use crate::transfer::{
    classify_step, exhaustive_table, match_case_patterns, transfer_step, CasePattern, Functor, ProcessStep,
    StepClass, TransferTable,
};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ToyCase {
    /// `F = ⌈x/3⌉: ℝ≥0 → ℕ`, `G = 3y`.
    Case1,
    /// `F = 3x: ℕ → ℝ≥0`, `G = ⌊x/3⌋`.
    Case2,
    /// `F = G = id` on `ℝ≥0`.
    Case3,
}

impl ToyCase {
    pub fn parse(name: &str) -> Option<Self> {
        match name {
            "case1" => Some(ToyCase::Case1),
            "case2" => Some(ToyCase::Case2),
            "case3" => Some(ToyCase::Case3),
            _ => None,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            ToyCase::Case1 => "case1",
            ToyCase::Case2 => "case2",
            ToyCase::Case3 => "case3",
        }
    }
}

/// One example step and its image.
#[derive(Debug, Clone)]
pub struct Transfer {
    pub step: ProcessStep,
    pub class: StepClass,
    pub image: ProcessStep,
    pub image_class: StepClass,
}

#[derive(Debug, Clone)]
pub struct ToyOutcome {
    pub case: ToyCase,
    pub connection: Connection,
    /// Which map carries the example steps.
    pub functor: Functor,
    pub examples: Vec<Transfer>,
    /// Every grid step `x → y` in the carrying map's source.
    pub exhaustive: TransferTable,
    /// Steps `x → x` over the grid, all of which stay reversible.
    pub identity_steps: usize,
    pub identity_preserved: bool,
    pub patterns: Vec<CasePattern>,
}

fn line(kind: LineKind, grid_n: u32) -> Arc<Space> {
    Arc::new(EntropySystem::numeric_line(kind, LineEntropy::Identity, grid_n).into())
}

/// Builds the connection and runs its example steps.
pub fn run(case: ToyCase, grid_n: u32) -> Result<ToyOutcome> {
    let reals = line(LineKind::Reals, grid_n);
    let naturals = line(LineKind::Naturals, grid_n);
    let (f, g, functor, examples): (_, _, _, &[(&str, &str)]) = match case {
        ToyCase::Case1 => (
            MonotoneMap::expr(reals.clone(), naturals.clone(), Expr::CeilDiv(int(3)))?,
            MonotoneMap::expr(naturals, reals, Expr::scale(int(3)))?,
            Functor::Left,
            &[("1", "1.2"), ("2.9", "3.1")],
        ),
        ToyCase::Case2 => (
            MonotoneMap::expr(naturals.clone(), reals.clone(), Expr::scale(int(3)))?,
            MonotoneMap::expr(reals, naturals, Expr::FloorDiv(int(3)))?,
            Functor::Right,
            &[("6", "9"), ("2", "2.1")],
        ),
        ToyCase::Case3 => {
            let id = MonotoneMap::identity(reals);
            (id.clone(), id, Functor::Left, &[("1", "1.2"), ("2.9", "3.1")])
        }
    };
    let connection = check_connection(&f, &g)?;
    let carrier = match functor {
        Functor::Left => &f,
        Functor::Right => &g,
    };
    let mut transfers = Vec::new();
    for (pre, post) in examples {
        let step = ProcessStep::parse(carrier.source().clone(), pre, post)?;
        let image = transfer_step(carrier, &step)?;
        transfers.push(Transfer {
            class: classify_step(&step)?,
            image_class: classify_step(&image)?,
            step,
            image,
        });
    }
    let exhaustive = exhaustive_table(&connection, functor)?;
    let domain = match functor {
        Functor::Left => connection.source_domain(),
        Functor::Right => connection.target_domain(),
    };
    let mut identity_preserved = true;
    for x in &domain {
        let step = ProcessStep::new(carrier.source().clone(), x.clone(), x.clone())?;
        identity_preserved &= classify_step(&transfer_step(carrier, &step)?)? == StepClass::Reversible;
    }
    Ok(ToyOutcome {
        case,
        patterns: match_case_patterns(&exhaustive),
        connection,
        functor,
        examples: transfers,
        exhaustive,
        identity_steps: domain.len(),
        identity_preserved,
    })
}

impl ToyOutcome {
    fn map_name(&self) -> &'static str {
        match self.functor {
            Functor::Left => "F",
            Functor::Right => "G",
        }
    }

    /// The human-readable report printed by `toy`.
    pub fn render(&self) -> String {
        let c = &self.connection;
        let mut out = String::new();
        let space = |s: &Space| s.line_kind().map_or("finite", |k| k.name());
        let _ = writeln!(out, "toy {}", self.case.name());
        let _ = writeln!(out, "F = {} : {} → {}", c.left(), space(c.source()), space(c.target()));
        let _ = writeln!(out, "G = {} : {} → {}", c.right(), space(c.target()), space(c.source()));
        let _ = writeln!(
            out,
            "grid: {} source points, {} target points",
            c.source_domain().len(),
            c.target_domain().len()
        );
        let _ = writeln!(out, "definition F(c) ⊑ d ⟺ c ≼ G(d): {}", c.definition);
        let _ = writeln!(
            out,
            "three conditions: {}",
            match c.conditions.first_witness() {
                None => "hold".to_string(),
                Some(w) => format!("fail ({w})"),
            }
        );
        if let Some(e) = &c.entropy_form {
            let _ = writeln!(out, "entropy form: {e}");
        }
        let _ = writeln!(out, "F ⊣ G: {}", if c.is_verified() { "yes" } else { "no" });
        let name = self.map_name();
        let _ = writeln!(out, "steps carried by {name}:");
        for t in &self.examples {
            let _ = writeln!(
                out,
                "  {} ({}) maps to {} ({})",
                t.step.render(),
                t.class,
                t.image.render(),
                t.image_class
            );
        }
        let _ = writeln!(
            out,
            "  x → x (reversible) maps to a reversible step at all {} grid points: {}",
            self.identity_steps,
            if self.identity_preserved { "yes" } else { "no" }
        );
        let t = &self.exhaustive;
        let _ = writeln!(out, "exhaustive grid steps: {}", t.total());
        let cell = |s, d| t.count(s, d);
        use StepClass::{IrreversibleIncreasing as I, Reversible as R};
        let _ = writeln!(out, "  reversible → reversible: {}", cell(R, R));
        let _ = writeln!(out, "  reversible → irreversible: {}", cell(R, I));
        let _ = writeln!(out, "  irreversible → reversible: {}", cell(I, R));
        let _ = writeln!(out, "  irreversible → irreversible: {}", cell(I, I));
        let _ = writeln!(out, "  decreasing (excluded): {}", t.decreasing());
        let names: Vec<&str> = self.patterns.iter().map(|p| p.name()).collect();
        let _ = writeln!(
            out,
            "matching patterns: {}",
            if names.is_empty() { "none".to_string() } else { names.join(", ") }
        );
        out
    }
}
