//! Bookkeeping for the one-particle Szilard engine with a demon memory.
//!
//! A cycle has five steps: reset, measurement (`NOT⊗Id`, 00 → 10), start of
//! the isothermal expansion, work extraction `W = k_B·T·ln 2`, and erasure
//! (`AND 00`) expelling `η·W` of heat. Entropy changes are in units of
//! `k_B·ln 2`. The memory multiplicity `Ω` counts consistent memory
//! microstates; `log2 Ω` is reported next to it.

use std::fmt;
use std::sync::{Arc, OnceLock};

use crate::entropy::EntropySystem;
use crate::error::{Error, Result};
use crate::galois::{check_connection, classify_map_strength, MonotoneMap};
use crate::poset::FiniteOrder;
use crate::rational;
use crate::space::Space;
use crate::transfer::{classify_step, ProcessStep, StepClass};

/// Boltzmann constant in J/K (exact SI value).
pub const K_B: f64 = 1.380649e-23;

/// Relative slack for comparisons between floating-point energies.
const REL_TOL: f64 = 1e-12;

/// Work extracted by one isothermal doubling at temperature `t`.
pub fn landauer_work(t: f64) -> f64 {
    K_B * t * std::f64::consts::LN_2
}

/// Operation on the two-bit logical memory word.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MemoryOp {
    Reset,
    /// `NOT⊗Id`: flips the first bit.
    NotId,
    Hold,
    /// `x ↦ 00 AND x`.
    And00,
}

impl MemoryOp {
    pub fn name(self) -> &'static str {
        match self {
            MemoryOp::Reset => "reset",
            MemoryOp::NotId => "not_id",
            MemoryOp::Hold => "hold",
            MemoryOp::And00 => "and_00",
        }
    }

    pub fn apply(self, word: u8) -> u8 {
        match self {
            MemoryOp::Reset | MemoryOp::And00 => 0,
            MemoryOp::NotId => word ^ 0b10,
            MemoryOp::Hold => word,
        }
    }

    /// Number of words sent to the same image as `word`.
    fn fibre(self, word: u8) -> u32 {
        let image = self.apply(word);
        (0..4).filter(|&w| self.apply(w) == image).count() as u32
    }
}

fn word_label(word: u8) -> String {
    format!("{:02b}", word & 0b11)
}

/// Memory states `word/ω` for each two-bit word and multiplicity
/// `ω ∈ {1, 2, 4}`, with entropy `log2 ω` bits.
pub fn memory_system() -> &'static Arc<Space> {
    static SYSTEM: OnceLock<Arc<Space>> = OnceLock::new();
    SYSTEM.get_or_init(|| {
        let mut labels = Vec::new();
        let mut values = Vec::new();
        for word in 0..4u8 {
            for (omega, bits) in [(1, 0), (2, 1), (4, 2)] {
                labels.push(format!("{}/{omega}", word_label(word)));
                values.push(rational::int(bits));
            }
        }
        let sys = EntropySystem::from_values(labels, values).expect("memory system is well formed");
        Arc::new(sys.into())
    })
}

/// Classifies `op` applied to a known word: the step goes from `word/1` to
/// `op(word)/ω` with `ω` the size of the preimage of `op(word)`.
pub fn classify_memory_op(op: MemoryOp, word: u8) -> Result<StepClass> {
    let space = memory_system().clone();
    let post = format!("{}/{}", word_label(op.apply(word)), op.fibre(word));
    let step = ProcessStep::parse(space, &format!("{}/1", word_label(word)), &post)?;
    classify_step(&step)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Partition {
    Absent,
    Middle,
    RightEnd,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ParticleSide {
    Unknown,
    Left,
    Right,
}

#[derive(Debug, Clone)]
pub struct EngineState {
    pub temperature: f64,
    pub eta: f64,
    pub partition: Partition,
    pub particle_side: ParticleSide,
    pub memory: Vec<bool>,
    pub omega: u32,
    pub cycle_index: u64,
    measure_class: StepClass,
    erase_class: StepClass,
}

/// Engine with partition in the middle, particle position unknown, memory
/// cleared and `Ω = 2`.
pub fn init_engine(temperature: f64, memory_bits: usize, eta: f64) -> Result<EngineState> {
    if !(temperature.is_finite() && temperature > 0.0) {
        return Err(Error::Invalid(format!("temperature {temperature} must be positive")));
    }
    if memory_bits < 2 {
        return Err(Error::Invalid(format!("memory needs at least 2 bits, got {memory_bits}")));
    }
    if !(eta.is_finite() && eta >= 1.0) {
        return Err(Error::Invalid(format!("erasure efficiency {eta} is below the Landauer bound")));
    }
    Ok(EngineState {
        temperature,
        eta,
        partition: Partition::Middle,
        particle_side: ParticleSide::Unknown,
        memory: vec![false; memory_bits],
        omega: 2,
        cycle_index: 0,
        measure_class: classify_memory_op(MemoryOp::NotId, 0)?,
        erase_class: classify_memory_op(MemoryOp::And00, 0b10)?,
    })
}

impl EngineState {
    pub fn work_per_cycle(&self) -> f64 {
        landauer_work(self.temperature)
    }

    fn word(&self) -> u8 {
        (u8::from(self.memory[0]) << 1) | u8::from(self.memory[1])
    }

    fn set_word(&mut self, word: u8) {
        self.memory[0] = word & 0b10 != 0;
        self.memory[1] = word & 0b01 != 0;
    }

    fn apply_op(&mut self, op: MemoryOp) {
        let w = op.apply(self.word());
        self.set_word(w);
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct StepRecord {
    pub cycle: u64,
    pub step: u8,
    pub memory_op: MemoryOp,
    pub reversible: bool,
    pub omega: u32,
    pub work_j: f64,
    pub heat_j: f64,
    pub ds_sys: f64,
    pub ds_env: f64,
    pub ds_total: f64,
}

impl StepRecord {
    pub fn s_info_bits(&self) -> f64 {
        f64::from(self.omega).log2()
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct CycleRecord {
    pub steps: Vec<StepRecord>,
}

impl CycleRecord {
    pub fn work_j(&self) -> f64 {
        self.steps.iter().map(|s| s.work_j).sum()
    }

    pub fn heat_j(&self) -> f64 {
        self.steps.iter().map(|s| s.heat_j).sum()
    }

    pub fn ds_total(&self) -> f64 {
        self.steps.iter().map(|s| s.ds_total).sum()
    }
}

/// Runs the five steps and returns their record.
pub fn run_cycle(engine: &mut EngineState) -> CycleRecord {
    let cycle = engine.cycle_index;
    let w = engine.work_per_cycle();
    let record = |step, memory_op, reversible, omega, work_j, heat_j, ds_env: f64| StepRecord {
        cycle,
        step,
        memory_op,
        reversible,
        omega,
        work_j,
        heat_j,
        ds_sys: 0.0,
        ds_env,
        ds_total: ds_env,
    };
    let mut steps = Vec::with_capacity(5);

    // 1: partition in the middle, no information on the particle.
    engine.apply_op(MemoryOp::Reset);
    engine.partition = Partition::Middle;
    engine.particle_side = ParticleSide::Unknown;
    engine.omega = 2;
    steps.push(record(1, MemoryOp::Reset, true, 2, 0.0, 0.0, 0.0));

    // 2: the particle is found on the left and the memory records it.
    engine.particle_side = ParticleSide::Left;
    engine.apply_op(MemoryOp::NotId);
    engine.omega = 1;
    let reversible = engine.measure_class == StepClass::Reversible;
    steps.push(record(2, MemoryOp::NotId, reversible, 1, 0.0, 0.0, 0.0));

    // 3: the partition starts moving.
    engine.partition = Partition::RightEnd;
    steps.push(record(3, MemoryOp::Hold, true, 1, 0.0, 0.0, 0.0));

    // 4: the gas has doubled its volume; no heat crosses in this step.
    engine.partition = Partition::Absent;
    steps.push(record(4, MemoryOp::Hold, true, 1, w, 0.0, 0.0));

    // 5: erasure. The bath supplies W back to the gas and receives η·W.
    engine.apply_op(MemoryOp::And00);
    engine.partition = Partition::Middle;
    engine.particle_side = ParticleSide::Unknown;
    engine.omega = 2;
    let reversible = engine.erase_class == StepClass::Reversible;
    let q = engine.eta * w;
    // work_j is signed: positive when extracted, negative when paid.
    steps.push(record(5, MemoryOp::And00, reversible, 2, -q, q, engine.eta - 1.0));

    engine.cycle_index += 1;
    CycleRecord { steps }
}

/// Erases `n_bits` of memory and returns the heat expelled.
pub fn erase_memory(engine: &mut EngineState, n_bits: i64) -> Result<f64> {
    if n_bits < 0 {
        return Err(Error::Invalid(format!("cannot erase {n_bits} bits")));
    }
    let n = n_bits as usize;
    if n > engine.memory.len() {
        return Err(Error::Invalid(format!("memory holds {} bits, asked to erase {n}", engine.memory.len())));
    }
    engine.memory[..n].iter_mut().for_each(|b| *b = false);
    engine.omega = 2;
    Ok(engine.eta * n as f64 * engine.work_per_cycle())
}

#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct Totals {
    pub work_j: f64,
    pub heat_j: f64,
    pub ds_total: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SzilardLedger {
    pub temperature: f64,
    pub records: Vec<CycleRecord>,
    pub totals: Totals,
}

impl SzilardLedger {
    pub fn new(temperature: f64) -> Self {
        SzilardLedger { temperature, records: Vec::new(), totals: Totals::default() }
    }

    pub fn push(&mut self, record: CycleRecord) {
        self.totals.work_j += record.work_j();
        self.totals.heat_j += record.heat_j();
        self.totals.ds_total += record.ds_total();
        self.records.push(record);
    }

    /// Work extracted in step 4 summed over all cycles.
    pub fn extracted_work(&self) -> f64 {
        self.records.iter().flat_map(|r| &r.steps).filter(|s| s.work_j > 0.0).map(|s| s.work_j).sum()
    }

    pub fn to_csv(&self) -> String {
        let mut out = String::from("cycle,step,memory_op,omega,s_info_bits,work_J,heat_J,dS_sys,dS_env,dS_total\n");
        for s in self.records.iter().flat_map(|r| &r.steps) {
            out.push_str(&format!(
                "{},{},{},{},{},{},{},{},{},{}\n",
                s.cycle,
                s.step,
                s.memory_op.name(),
                s.omega,
                s.s_info_bits(),
                joules(s.work_j),
                joules(s.heat_j),
                s.ds_sys,
                s.ds_env,
                s.ds_total
            ));
        }
        out
    }
}

fn joules(x: f64) -> String {
    if x == 0.0 {
        "0".into()
    } else {
        format!("{x:e}")
    }
}

/// Runs `cycles` cycles on a fresh engine.
pub fn simulate(temperature: f64, memory_bits: usize, eta: f64, cycles: u64) -> Result<SzilardLedger> {
    let mut engine = init_engine(temperature, memory_bits, eta)?;
    let mut ledger = SzilardLedger::new(temperature);
    ledger.records.reserve(cycles as usize);
    for _ in 0..cycles {
        ledger.push(run_cycle(&mut engine));
    }
    Ok(ledger)
}

#[derive(Debug, Clone, PartialEq)]
pub struct AuditReport {
    pub passes: bool,
    pub violations: Vec<String>,
    /// `K: {left,right} → {10,01}` and `H` back form connections both ways
    /// and are order-isomorphisms.
    pub correspondence_isomorphic: bool,
}

impl fmt::Display for AuditReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "second-law audit: {}", if self.passes { "passes" } else { "fails" })?;
        writeln!(f, "K, H order-isomorphisms: {}", self.correspondence_isomorphic)?;
        for v in &self.violations {
            writeln!(f, "  {v}")?;
        }
        Ok(())
    }
}

fn below(a: f64, b: f64) -> bool {
    a < b - REL_TOL * a.abs().max(b.abs())
}

/// Checks `ΔS_total ≥ 0` per step and per cycle, every erasure against the
/// Landauer bound, extracted work against dissipated heat after every whole
/// cycle, and the stored totals against the records.
pub fn audit_ledger(ledger: &SzilardLedger) -> AuditReport {
    let mut violations = Vec::new();
    let bound = landauer_work(ledger.temperature);
    let (mut work, mut heat) = (0.0, 0.0);
    let mut sums = Totals::default();
    for record in &ledger.records {
        for s in &record.steps {
            if s.ds_total < 0.0 {
                violations.push(format!("cycle {} step {}: dS_total = {}", s.cycle, s.step, s.ds_total));
            }
            if s.memory_op == MemoryOp::And00 && below(s.heat_j, bound) {
                violations.push(format!(
                    "cycle {} step {}: erasure heat {:e} J below k_B T ln 2 = {:e} J",
                    s.cycle, s.step, s.heat_j, bound
                ));
            }
            if s.work_j > 0.0 {
                work += s.work_j;
            }
            heat += s.heat_j;
        }
        let cycle = record.steps.first().map_or(0, |s| s.cycle);
        if record.ds_total() < 0.0 {
            violations.push(format!("cycle {cycle}: dS_total = {}", record.ds_total()));
        }
        if below(heat, work) {
            violations.push(format!("after cycle {cycle}: extracted {work:e} J exceeds dissipated {heat:e} J"));
        }
        sums.work_j += record.work_j();
        sums.heat_j += record.heat_j();
        sums.ds_total += record.ds_total();
    }
    let close = |a: f64, b: f64| (a - b).abs() <= REL_TOL * a.abs().max(b.abs()).max(f64::MIN_POSITIVE);
    if !(close(sums.work_j, ledger.totals.work_j)
        && close(sums.heat_j, ledger.totals.heat_j)
        && close(sums.ds_total, ledger.totals.ds_total))
    {
        violations.push("stored totals differ from the record sums".into());
    }
    let correspondence_isomorphic = correspondence_is_isomorphic().unwrap_or(false);
    if !correspondence_isomorphic {
        violations.push("K and H are not mutually inverse order-isomorphisms".into());
    }
    AuditReport { passes: violations.is_empty(), violations, correspondence_isomorphic }
}

/// The localization space `{left, right}` and the committed memory words
/// `{10, 01}`, both discretely ordered, with `K(left) = 10`, `K(right) = 01`
/// and `H` its inverse.
pub fn correspondence_maps() -> Result<(MonotoneMap, MonotoneMap)> {
    let e: Arc<Space> = Arc::new(FiniteOrder::discrete(&["left", "right"])?.into());
    let m: Arc<Space> = Arc::new(FiniteOrder::discrete(&["10", "01"])?.into());
    let k = MonotoneMap::from_pairs(e.clone(), m.clone(), &[("left", "10"), ("right", "01")])?;
    let h = MonotoneMap::from_pairs(m, e, &[("10", "left"), ("01", "right")])?;
    Ok((k, h))
}

fn correspondence_is_isomorphic() -> Result<bool> {
    let (k, h) = correspondence_maps()?;
    let both_ways = check_connection(&k, &h)?.is_verified() && check_connection(&h, &k)?.is_verified();
    let iso = classify_map_strength(&k, Some(&h))?.order_isomorphism.holds
        && classify_map_strength(&h, Some(&k))?.order_isomorphism.holds;
    Ok(both_ways && iso)
}
