//! Reversibility of process steps and how it travels along the maps of a
//! connection.
//!
//! A process is handled step by step, `(pre, post)`, so the image of a step
//! under a map that merges states is still well defined.

use std::fmt;
use std::ops::{Add, AddAssign};
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::galois::{Connection, MonotoneMap};
use crate::space::{Space, State};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum StepClass {
    /// `S(pre) = S(post)`
    Reversible,
    /// `S(pre) < S(post)`
    IrreversibleIncreasing,
    /// `S(pre) > S(post)`; not adiabatic, kept out of the case tables.
    EntropyDecreasing,
}

impl StepClass {
    pub fn name(self) -> &'static str {
        match self {
            StepClass::Reversible => "reversible",
            StepClass::IrreversibleIncreasing => "irreversible",
            StepClass::EntropyDecreasing => "decreasing",
        }
    }

    fn index(self) -> usize {
        match self {
            StepClass::Reversible => 0,
            StepClass::IrreversibleIncreasing => 1,
            StepClass::EntropyDecreasing => 2,
        }
    }

    const ALL: [StepClass; 3] = [
        StepClass::Reversible,
        StepClass::IrreversibleIncreasing,
        StepClass::EntropyDecreasing,
    ];
}

impl fmt::Display for StepClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Debug, Clone)]
pub struct ProcessStep {
    pub system: Arc<Space>,
    pub pre: State,
    pub post: State,
}

impl ProcessStep {
    pub fn new(system: Arc<Space>, pre: State, post: State) -> Result<Self> {
        for s in [&pre, &post] {
            if !system.contains(s) {
                return Err(Error::OutsideCarrier(system.render(s)));
            }
        }
        Ok(ProcessStep { system, pre, post })
    }

    /// Parses both endpoints with [`Space::parse_state`].
    pub fn parse(system: Arc<Space>, pre: &str, post: &str) -> Result<Self> {
        let pre = system.parse_state(pre)?;
        let post = system.parse_state(post)?;
        Ok(ProcessStep { system, pre, post })
    }

    pub fn render(&self) -> String {
        format!("{} → {}", self.system.render(&self.pre), self.system.render(&self.post))
    }
}

/// Compares entropies exactly.
pub fn classify_step(step: &ProcessStep) -> Result<StepClass> {
    let sys = step
        .system
        .as_system()
        .ok_or_else(|| Error::Unsupported("step classification needs an entropy system".into()))?;
    let (a, b) = (sys.entropy(&step.pre)?, sys.entropy(&step.post)?);
    Ok(match a.cmp(&b) {
        std::cmp::Ordering::Equal => StepClass::Reversible,
        std::cmp::Ordering::Less => StepClass::IrreversibleIncreasing,
        std::cmp::Ordering::Greater => StepClass::EntropyDecreasing,
    })
}

/// `(F(pre) → F(post))` in the target of `map`.
pub fn transfer_step(map: &MonotoneMap, step: &ProcessStep) -> Result<ProcessStep> {
    if !(Arc::ptr_eq(map.source(), &step.system) || **map.source() == *step.system) {
        return Err(Error::ShapeMismatch("step does not live in the source of the map".into()));
    }
    Ok(ProcessStep {
        system: map.target().clone(),
        pre: map.apply(&step.pre)?,
        post: map.apply(&step.post)?,
    })
}

/// Which map of a connection carries the steps.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Functor {
    /// `F`, steps in the source.
    Left,
    /// `G`, steps in the target.
    Right,
}

/// Counts of (source class, target class) over transferred steps.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct TransferTable {
    counts: [[u64; 3]; 3],
}

impl TransferTable {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn record(&mut self, source: StepClass, target: StepClass) {
        self.counts[source.index()][target.index()] += 1;
    }

    pub fn count(&self, source: StepClass, target: StepClass) -> u64 {
        self.counts[source.index()][target.index()]
    }

    /// Steps with a decreasing class on either side.
    pub fn decreasing(&self) -> u64 {
        let mut n = 0;
        for s in StepClass::ALL {
            for t in StepClass::ALL {
                if s == StepClass::EntropyDecreasing || t == StepClass::EntropyDecreasing {
                    n += self.count(s, t);
                }
            }
        }
        n
    }

    pub fn total(&self) -> u64 {
        self.counts.iter().flatten().sum()
    }

    /// Occupied cells of the reversible/irreversible square, row-major.
    pub fn occupied(&self) -> Vec<(StepClass, StepClass)> {
        let square = [StepClass::Reversible, StepClass::IrreversibleIncreasing];
        let mut out = Vec::new();
        for s in square {
            for t in square {
                if self.count(s, t) > 0 {
                    out.push((s, t));
                }
            }
        }
        out
    }

    pub fn is_diagonal(&self) -> bool {
        self.occupied().iter().all(|(s, t)| s == t)
    }

    /// Rows are source classes, columns target classes; the last column
    /// counts transfers that land on a decreasing step.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("source,reversible,irreversible,decreasing\n");
        for s in StepClass::ALL {
            let row = &self.counts[s.index()];
            out.push_str(&format!("{},{},{},{}\n", s.name(), row[0], row[1], row[2]));
        }
        out
    }
}

impl AddAssign<&TransferTable> for TransferTable {
    fn add_assign(&mut self, other: &TransferTable) {
        for i in 0..3 {
            for j in 0..3 {
                self.counts[i][j] += other.counts[i][j];
            }
        }
    }
}

impl Add for TransferTable {
    type Output = TransferTable;

    fn add(mut self, other: TransferTable) -> TransferTable {
        self += &other;
        self
    }
}

/// Classifies every step and its image under the chosen map.
pub fn empirical_table(conn: &Connection, functor: Functor, steps: &[ProcessStep]) -> Result<TransferTable> {
    if !conn.is_verified() {
        return Err(Error::Unverified);
    }
    let map = match functor {
        Functor::Left => conn.left(),
        Functor::Right => conn.right(),
    };
    let mut table = TransferTable::new();
    for step in steps {
        let moved = transfer_step(map, step)?;
        table.record(classify_step(step)?, classify_step(&moved)?);
    }
    Ok(table)
}

/// Every step `(x → y)` over the map's checked source domain.
pub fn exhaustive_steps(conn: &Connection, functor: Functor) -> Vec<ProcessStep> {
    let (space, domain) = match functor {
        Functor::Left => (conn.source().clone(), conn.source_domain()),
        Functor::Right => (conn.target().clone(), conn.target_domain()),
    };
    let mut out = Vec::with_capacity(domain.len() * domain.len());
    for x in &domain {
        for y in &domain {
            out.push(ProcessStep { system: space.clone(), pre: x.clone(), post: y.clone() });
        }
    }
    out
}

pub fn exhaustive_table(conn: &Connection, functor: Functor) -> Result<TransferTable> {
    empirical_table(conn, functor, &exhaustive_steps(conn, functor))
}

/// The three possibility tables; a cell marked YES may be occupied.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum CasePattern {
    /// Forbids irreversible → reversible; also the classical reversibility table.
    Case1,
    /// Forbids reversible → irreversible.
    Case2,
    /// Only the diagonal.
    Case3,
}

impl CasePattern {
    pub const ALL: [CasePattern; 3] = [CasePattern::Case1, CasePattern::Case2, CasePattern::Case3];

    pub fn name(self) -> &'static str {
        match self {
            CasePattern::Case1 => "case1",
            CasePattern::Case2 => "case2",
            CasePattern::Case3 => "case3",
        }
    }

    pub fn allows(self, source: StepClass, target: StepClass) -> bool {
        use StepClass::{IrreversibleIncreasing as I, Reversible as R};
        matches!(
            (self, source, target),
            (_, R, R) | (_, I, I) | (CasePattern::Case1, R, I) | (CasePattern::Case2, I, R)
        )
    }
}

impl fmt::Display for CasePattern {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// Patterns whose YES cells cover every occupied cell.
pub fn match_case_patterns(table: &TransferTable) -> Vec<CasePattern> {
    let occupied = table.occupied();
    CasePattern::ALL
        .into_iter()
        .filter(|p| occupied.iter().all(|&(s, t)| p.allows(s, t)))
        .collect()
}
