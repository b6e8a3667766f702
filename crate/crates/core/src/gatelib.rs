//! Pulse sequences for the wire-gate catalog and their ideal-model
//! verification against textbook target unitaries.
//!
//! Gate constructions are written the way they appear as operator products,
//! leftmost factor applied last. [`from_written`] reverses them into temporal
//! order; that is the only place the reversal happens.
//!
//! Conventions for the addressing factors (same target list, one pulse per
//! target):
//!
//! | factor | Θ  | φ     |
//! |--------|----|-------|
//! | X̃      | π  | 0     |
//! | Ỹ      | π  | π/2   |
//! | √X̃     | π/2| 0     |
//! | √Ỹ     | π/2| π/2   |
//! | Ỹ²     | 2π | π/2   |
//!
//! Daggered factors keep Θ and advance φ by π.

use std::f64::consts::{FRAC_1_SQRT_2, FRAC_PI_2, FRAC_PI_4, PI};
use std::fmt;
use std::str::FromStr;

use num_complex::Complex64;

use crate::atom_model::{
    build_interaction_graph, builtin_layout, AtomArray, Layout, PhysicalParams,
};
use crate::error::{Error, Result};
use crate::pulse::{
    sequence_propagate, single_qubit_rotation, PropagationModel, Pulse, PulseSequence,
};
use crate::qops::{self, c64, kron, ComplexMatrix};

/// Deviation and leakage threshold for a gate to verify.
pub const VERIFY_TOL: f64 = 1e-9;

/// Spacing used to instantiate layouts for ideal-model work, where only the
/// blockade graph matters.
pub const REFERENCE_SPACING_UM: f64 = 7.0;

type Factor = Vec<Pulse>;

fn factor(targets: &[&str], theta: f64, phi: f64) -> Factor {
    targets.iter().map(|t| Pulse::on(t, theta, phi)).collect()
}

fn x(t: &[&str]) -> Factor {
    factor(t, PI, 0.0)
}
fn xd(t: &[&str]) -> Factor {
    factor(t, PI, PI)
}
fn y(t: &[&str]) -> Factor {
    factor(t, PI, FRAC_PI_2)
}
fn yd(t: &[&str]) -> Factor {
    factor(t, PI, FRAC_PI_2 + PI)
}
fn sqrt_x(t: &[&str]) -> Factor {
    factor(t, FRAC_PI_2, 0.0)
}
fn sqrt_xd(t: &[&str]) -> Factor {
    factor(t, FRAC_PI_2, PI)
}
fn sqrt_y(t: &[&str]) -> Factor {
    factor(t, FRAC_PI_2, FRAC_PI_2)
}
fn sqrt_yd(t: &[&str]) -> Factor {
    factor(t, FRAC_PI_2, FRAC_PI_2 + PI)
}
fn x_squared(t: &[&str]) -> Factor {
    factor(t, 2.0 * PI, 0.0)
}
fn y_squared(t: &[&str]) -> Factor {
    factor(t, 2.0 * PI, FRAC_PI_2)
}
fn rot(t: &str, theta: f64, phi: f64) -> Factor {
    vec![Pulse::on(t, theta, phi)]
}

/// Converts an operator product (leftmost factor last in time) into a
/// temporal pulse sequence.
pub fn from_written(factors: Vec<Factor>) -> PulseSequence {
    factors.into_iter().rev().flatten().collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum DataQubit {
    A,
    B,
}

impl DataQubit {
    pub fn label(&self) -> &'static str {
        match self {
            DataQubit::A => "A",
            DataQubit::B => "B",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum OneQubitGate {
    X,
    Y,
    Z,
    H,
    P(f64),
    S,
    T,
    R { theta: f64, phi: f64 },
}

/// Control → target direction of a controlled gate on Chain3.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Direction {
    AB,
    BA,
}

impl Direction {
    fn qubits(&self) -> (DataQubit, DataQubit) {
        match self {
            Direction::AB => (DataQubit::A, DataQubit::B),
            Direction::BA => (DataQubit::B, DataQubit::A),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum TwoQubitGate {
    CX(Direction),
    CY(Direction),
    CZ,
    Swap,
    /// Phase `e^{iα}` on |00⟩.
    CP00(f64),
    CP01(f64),
    CP10(f64),
    /// The standard controlled phase, `e^{iα}` on |11⟩.
    CP11(f64),
}

/// Reflection about the plane orthogonal to one two-qubit basis state.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Inversion {
    M00,
    M01,
    M10,
    M11,
}

impl Inversion {
    pub const ALL: [Inversion; 4] = [
        Inversion::M00,
        Inversion::M01,
        Inversion::M10,
        Inversion::M11,
    ];

    fn basis_index(&self) -> usize {
        match self {
            Inversion::M00 => 0,
            Inversion::M01 => 1,
            Inversion::M10 => 2,
            Inversion::M11 => 3,
        }
    }
}

/// Pair of two-qubit basis states addressed by a base-pair rotation. Only the
/// five pairs with a known wire construction are representable.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum BasisPair {
    P00_01,
    P00_11,
    P01_10,
    P01_11,
    P10_11,
}

impl BasisPair {
    pub const ALL: [BasisPair; 5] = [
        BasisPair::P00_01,
        BasisPair::P00_11,
        BasisPair::P01_10,
        BasisPair::P01_11,
        BasisPair::P10_11,
    ];

    /// Basis indices `(j, k)` with `|ab⟩ ↦ 2a + b`.
    pub fn indices(&self) -> (usize, usize) {
        match self {
            BasisPair::P00_01 => (0, 1),
            BasisPair::P00_11 => (0, 3),
            BasisPair::P01_10 => (1, 2),
            BasisPair::P01_11 => (1, 3),
            BasisPair::P10_11 => (2, 3),
        }
    }

    pub fn name(&self) -> &'static str {
        match self {
            BasisPair::P00_01 => "00-01",
            BasisPair::P00_11 => "00-11",
            BasisPair::P01_10 => "01-10",
            BasisPair::P01_11 => "01-11",
            BasisPair::P10_11 => "10-11",
        }
    }
}

impl fmt::Display for BasisPair {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for BasisPair {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let digits: String = s.chars().filter(|c| *c == '0' || *c == '1').collect();
        let pair = match digits.as_str() {
            "0001" | "0100" => BasisPair::P00_01,
            "0011" | "1100" => BasisPair::P00_11,
            "0110" | "1001" => BasisPair::P01_10,
            "0111" | "1101" => BasisPair::P01_11,
            "1011" | "1110" => BasisPair::P10_11,
            _ => return Err(Error::UnsupportedPair(s.to_string())),
        };
        Ok(pair)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum MultiQubitGate {
    CczY,
    ToffY,
    CczChain,
    ToffChain,
}

impl MultiQubitGate {
    pub fn layout(&self) -> Layout {
        match self {
            MultiQubitGate::CczY | MultiQubitGate::ToffY => Layout::YShape,
            MultiQubitGate::CczChain | MultiQubitGate::ToffChain => Layout::Chain5,
        }
    }
}

pub fn one_qubit_sequence(gate: OneQubitGate, target: DataQubit) -> Result<PulseSequence> {
    let t = [target.label()];
    let seq = match gate {
        OneQubitGate::X => from_written(vec![x(&t)]),
        OneQubitGate::Y => from_written(vec![y(&t)]),
        OneQubitGate::Z => from_written(vec![x(&t), y(&t)]),
        OneQubitGate::H => from_written(vec![x(&t), sqrt_y(&t)]),
        // The flip X̃† is applied first; the opposite order yields P(−φ).
        OneQubitGate::P(phi) => from_written(vec![rot(t[0], PI, phi / 2.0), xd(&t)]),
        OneQubitGate::S => return one_qubit_sequence(OneQubitGate::P(FRAC_PI_2), target),
        OneQubitGate::T => return one_qubit_sequence(OneQubitGate::P(FRAC_PI_4), target),
        OneQubitGate::R { theta, phi } => {
            check_angle("theta", theta)?;
            from_written(vec![rot(t[0], theta, phi)])
        }
    };
    Ok(seq)
}

/// `e^{iα}·I` on the data subspace, as four wire-mediated basis-state phases.
pub fn global_phase_sequence(alpha: f64) -> PulseSequence {
    let w = ["W"];
    let ab = ["A", "B"];
    let b = ["B"];
    from_written(vec![
        y(&b),
        xd(&w),
        rot("W", PI, alpha),
        yd(&ab),
        xd(&w),
        rot("W", PI, alpha),
        yd(&b),
        xd(&w),
        rot("W", PI, alpha),
        y(&ab),
        xd(&w),
        rot("W", PI, alpha),
    ])
}

pub fn two_qubit_sequence(gate: TwoQubitGate) -> PulseSequence {
    let w = ["W"];
    let ab = ["A", "B"];
    match gate {
        TwoQubitGate::CX(dir) => {
            let (c, t) = dir.qubits();
            let (c, t) = ([c.label()], [t.label()]);
            from_written(vec![yd(&c), sqrt_yd(&t), y_squared(&w), sqrt_y(&t), y(&c)])
        }
        TwoQubitGate::CY(dir) => {
            let (c, t) = dir.qubits();
            let (c, t) = ([c.label()], [t.label()]);
            // √X̃ outermost on the left: the daggered placement maps CZ to C(−Y).
            from_written(vec![yd(&c), sqrt_x(&t), y_squared(&w), sqrt_xd(&t), y(&c)])
        }
        TwoQubitGate::CZ => from_written(vec![yd(&ab), y_squared(&w), y(&ab)]),
        TwoQubitGate::Swap => {
            let a = ["A"];
            from_written(vec![x(&a), x(&w), x(&ab), x(&w), xd(&ab), x(&w), xd(&a)])
        }
        TwoQubitGate::CP00(alpha) => from_written(vec![xd(&w), rot("W", PI, alpha)]),
        TwoQubitGate::CP11(alpha) => cp_conjugated(&ab, alpha),
        TwoQubitGate::CP01(alpha) => cp_conjugated(&["B"], alpha),
        TwoQubitGate::CP10(alpha) => cp_conjugated(&["A"], alpha),
    }
}

fn cp_conjugated(flip: &[&str], alpha: f64) -> PulseSequence {
    from_written(vec![xd(flip), xd(&["W"]), rot("W", PI, alpha), x(flip)])
}

pub fn inversion_sequence(which: Inversion) -> PulseSequence {
    match which {
        Inversion::M00 => two_qubit_sequence(TwoQubitGate::CP00(PI)),
        Inversion::M01 => two_qubit_sequence(TwoQubitGate::CP01(PI)),
        Inversion::M10 => two_qubit_sequence(TwoQubitGate::CP10(PI)),
        Inversion::M11 => two_qubit_sequence(TwoQubitGate::CZ),
    }
}

/// Two-level rotation `|j⟩ ↦ cos(Θ/2)|j⟩ − i e^{iφ} sin(Θ/2)|k⟩` between the
/// states of `pair`, identity on the complementary pair.
pub fn pair_rotation_sequence(pair: BasisPair, theta: f64, phi: f64) -> Result<PulseSequence> {
    check_angle("theta", theta)?;
    let (a, b, w, ab) = (["A"], ["B"], ["W"], ["A", "B"]);
    let seq = match pair {
        BasisPair::P00_01 => {
            from_written(vec![x(&w), x(&b), rot("W", theta, -phi), xd(&b), xd(&w)])
        }
        BasisPair::P00_11 => from_written(vec![
            x(&w),
            x(&ab),
            rot("W", theta, -(phi + FRAC_PI_2)),
            xd(&ab),
            xd(&w),
        ]),
        BasisPair::P01_10 => from_written(vec![
            x(&b),
            x(&w),
            x(&ab),
            rot("W", theta, -(phi + FRAC_PI_2)),
            xd(&ab),
            xd(&w),
            xd(&b),
        ]),
        BasisPair::P01_11 => from_written(vec![
            x(&b),
            x(&w),
            x(&a),
            rot("W", theta, -phi),
            xd(&a),
            xd(&w),
            xd(&b),
        ]),
        BasisPair::P10_11 => from_written(vec![
            x(&a),
            x(&w),
            x(&b),
            rot("W", theta, -phi),
            xd(&b),
            xd(&w),
            xd(&a),
        ]),
    };
    Ok(seq)
}

/// The chain CCZ body between its pseudo-Hadamard end caps; on its own it
/// acts as a doubly controlled −X on `C`.
fn chain_core() -> Vec<Factor> {
    vec![
        y(&["A", "B"]),
        xd(&["W2"]),
        yd(&["W1"]),
        xd(&["B", "C"]),
        sqrt_x(&["W2"]),
        x_squared(&["B", "C"]),
        sqrt_xd(&["W2"]),
        xd(&["B", "C"]),
        x(&["W1", "W2"]),
        yd(&["A", "B"]),
    ]
}

pub fn multi_qubit_sequence(gate: MultiQubitGate, layout: Layout) -> Result<PulseSequence> {
    if gate.layout() != layout {
        return Err(Error::LayoutMismatch {
            gate: format!("{gate:?}"),
            expected: gate.layout().to_string(),
            found: layout.to_string(),
        });
    }
    let (c, w) = (["C"], ["W"]);
    let seq = match gate {
        MultiQubitGate::CczY => {
            let abc = ["A", "B", "C"];
            from_written(vec![yd(&abc), y_squared(&w), y(&abc)])
        }
        MultiQubitGate::ToffY => {
            let ab = ["A", "B"];
            from_written(vec![
                sqrt_yd(&c),
                yd(&ab),
                y_squared(&w),
                y(&ab),
                sqrt_y(&c),
            ])
        }
        MultiQubitGate::CczChain => {
            let mut f = vec![sqrt_y(&c)];
            f.extend(chain_core());
            f.push(sqrt_yd(&c));
            from_written(f)
        }
        MultiQubitGate::ToffChain => {
            // Ỹ_C conjugation turns the core's controlled −X into controlled X.
            let mut f = vec![y(&c)];
            f.extend(chain_core());
            f.push(yd(&c));
            from_written(f)
        }
    };
    Ok(seq)
}

fn check_angle(name: &'static str, theta: f64) -> Result<()> {
    if !(theta >= 0.0) || !theta.is_finite() {
        return Err(Error::InvalidParameter {
            name,
            reason: format!("rotation angle must be finite and nonnegative, got {theta}"),
        });
    }
    Ok(())
}

/// Any entry of the gate catalog.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Gate {
    One(OneQubitGate, DataQubit),
    GlobalPhase(f64),
    Two(TwoQubitGate),
    Inversion(Inversion),
    PairRotation {
        pair: BasisPair,
        theta: f64,
        phi: f64,
    },
    Multi(MultiQubitGate),
}

impl Gate {
    pub fn layout(&self) -> Layout {
        match self {
            Gate::Multi(m) => m.layout(),
            _ => Layout::Chain3,
        }
    }

    pub fn sequence(&self) -> Result<PulseSequence> {
        match *self {
            Gate::One(g, q) => one_qubit_sequence(g, q),
            Gate::GlobalPhase(alpha) => Ok(global_phase_sequence(alpha)),
            Gate::Two(g) => Ok(two_qubit_sequence(g)),
            Gate::Inversion(m) => Ok(inversion_sequence(m)),
            Gate::PairRotation { pair, theta, phi } => pair_rotation_sequence(pair, theta, phi),
            Gate::Multi(m) => multi_qubit_sequence(m, m.layout()),
        }
    }

    /// Target unitary on the data qubits (A most significant).
    pub fn target_unitary(&self) -> ComplexMatrix {
        match *self {
            Gate::One(g, q) => {
                let m = one_qubit_matrix(g);
                match q {
                    DataQubit::A => kron(&m, &qops::identity(2)),
                    DataQubit::B => kron(&qops::identity(2), &m),
                }
            }
            Gate::GlobalPhase(alpha) => qops::identity(4) * Complex64::from_polar(1.0, alpha),
            Gate::Two(g) => two_qubit_matrix(g),
            Gate::Inversion(m) => basis_phase(4, m.basis_index(), PI),
            Gate::PairRotation { pair, theta, phi } => {
                let (j, k) = pair.indices();
                two_level_rotation(4, j, k, theta, phi)
            }
            Gate::Multi(MultiQubitGate::CczY | MultiQubitGate::CczChain) => basis_phase(8, 7, PI),
            Gate::Multi(MultiQubitGate::ToffY | MultiQubitGate::ToffChain) => toffoli(),
        }
    }
}

fn one_qubit_matrix(g: OneQubitGate) -> ComplexMatrix {
    let phase = |phi: f64| qops::diag(&[c64(1.0, 0.0), Complex64::from_polar(1.0, phi)]);
    match g {
        OneQubitGate::X => qops::sigma_x(),
        OneQubitGate::Y => qops::sigma_y(),
        OneQubitGate::Z => qops::sigma_z(),
        OneQubitGate::H => {
            let h = FRAC_1_SQRT_2;
            ComplexMatrix::from_row_slice(2, 2, &[c64(h, 0.), c64(h, 0.), c64(h, 0.), c64(-h, 0.)])
        }
        OneQubitGate::P(phi) => phase(phi),
        OneQubitGate::S => phase(FRAC_PI_2),
        OneQubitGate::T => phase(FRAC_PI_4),
        OneQubitGate::R { theta, phi } => single_qubit_rotation(theta, phi),
    }
}

/// `|c⟩|t⟩ ↦ |c⟩ G^c |t⟩` on two qubits, with the control on `control`.
fn controlled(g: &ComplexMatrix, control: DataQubit) -> ComplexMatrix {
    let p0 = qops::diag(&[c64(1.0, 0.0), c64(0.0, 0.0)]);
    let p1 = qops::diag(&[c64(0.0, 0.0), c64(1.0, 0.0)]);
    let id = qops::identity(2);
    match control {
        DataQubit::A => kron(&p0, &id) + kron(&p1, g),
        DataQubit::B => kron(&id, &p0) + kron(g, &p1),
    }
}

fn two_qubit_matrix(g: TwoQubitGate) -> ComplexMatrix {
    match g {
        TwoQubitGate::CX(dir) => controlled(&qops::sigma_x(), dir.qubits().0),
        TwoQubitGate::CY(dir) => controlled(&qops::sigma_y(), dir.qubits().0),
        TwoQubitGate::CZ => basis_phase(4, 3, PI),
        TwoQubitGate::Swap => {
            let mut m = ComplexMatrix::zeros(4, 4);
            for (i, j) in [(0, 0), (1, 2), (2, 1), (3, 3)] {
                m[(i, j)] = c64(1.0, 0.0);
            }
            m
        }
        TwoQubitGate::CP00(a) => basis_phase(4, 0, a),
        TwoQubitGate::CP01(a) => basis_phase(4, 1, a),
        TwoQubitGate::CP10(a) => basis_phase(4, 2, a),
        TwoQubitGate::CP11(a) => basis_phase(4, 3, a),
    }
}

fn basis_phase(dim: usize, index: usize, alpha: f64) -> ComplexMatrix {
    let mut m = qops::identity(dim);
    m[(index, index)] = Complex64::from_polar(1.0, alpha);
    m
}

/// Rotation between basis states `j` and `k` of a `dim`-level space.
pub fn two_level_rotation(dim: usize, j: usize, k: usize, theta: f64, phi: f64) -> ComplexMatrix {
    let r = single_qubit_rotation(theta, phi);
    let mut m = qops::identity(dim);
    m[(j, j)] = r[(0, 0)];
    m[(k, j)] = r[(1, 0)];
    m[(j, k)] = r[(0, 1)];
    m[(k, k)] = r[(1, 1)];
    m
}

fn toffoli() -> ComplexMatrix {
    let mut m = qops::identity(8);
    m[(6, 6)] = c64(0.0, 0.0);
    m[(7, 7)] = c64(0.0, 0.0);
    m[(6, 7)] = c64(1.0, 0.0);
    m[(7, 6)] = c64(1.0, 0.0);
    m
}

/// Data-subspace block of a full propagator (every wire in |0⟩ on both
/// sides) and its leakage `max_k (1 − ‖column_k‖²)`.
pub fn data_subspace_unitary(
    u_full: &ComplexMatrix,
    array: &AtomArray,
) -> Result<(ComplexMatrix, f64)> {
    let dim = array.dim();
    if u_full.shape() != (dim, dim) {
        return Err(Error::DimensionMismatch {
            expected: (dim, dim),
            found: u_full.shape(),
        });
    }
    let k = 1 << array.data_indices().len();
    let idx: Vec<usize> = (0..k).map(|s| array.embed_data_state(s)).collect();
    let block = ComplexMatrix::from_fn(k, k, |i, j| u_full[(idx[i], idx[j])]);
    let leakage = block
        .column_iter()
        .map(|col| 1.0 - col.norm_squared())
        .fold(0.0_f64, f64::max);
    Ok((block, leakage))
}

/// A named gate ready for verification or export.
#[derive(Debug, Clone, PartialEq)]
pub struct GateSpec {
    pub name: String,
    pub layout: Layout,
    pub data_qubit_count: usize,
    pub target_unitary: ComplexMatrix,
    pub sequence: PulseSequence,
}

impl GateSpec {
    pub fn new(name: impl Into<String>, gate: Gate) -> Result<Self> {
        let layout = gate.layout();
        Ok(Self {
            name: name.into(),
            layout,
            data_qubit_count: layout.data_qubit_count(),
            target_unitary: gate.target_unitary(),
            sequence: gate.sequence()?,
        })
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct VerificationReport {
    pub gate: String,
    pub model: PropagationModel,
    /// `phase_distance(data block, target)`.
    pub deviation: f64,
    /// Phase `α` with `target ≈ e^{iα}·(data block)`, in `(−π, π]`.
    pub extracted_global_phase: f64,
    pub wire_return_defect: f64,
    pub pass: bool,
    /// Set when the sequence could not be propagated at all.
    pub error: Option<String>,
}

/// Ideal-model propagator of `seq` on the named layout.
pub fn ideal_unitary(seq: &PulseSequence, layout: Layout) -> Result<(ComplexMatrix, AtomArray)> {
    let params = PhysicalParams::default();
    let array = builtin_layout(layout, REFERENCE_SPACING_UM)?;
    let graph = build_interaction_graph(&array, &params)?;
    let u = sequence_propagate(seq, PropagationModel::Ideal, &array, &graph, &params)?;
    Ok((u, array))
}

/// Compares an already-extracted data block against a target.
pub fn compare_to_target(
    gate: &str,
    block: &ComplexMatrix,
    leakage: f64,
    target: &ComplexMatrix,
) -> VerificationReport {
    let fail = |msg: String| VerificationReport {
        gate: gate.to_string(),
        model: PropagationModel::Ideal,
        deviation: f64::INFINITY,
        extracted_global_phase: 0.0,
        wire_return_defect: leakage,
        pass: false,
        error: Some(msg),
    };
    let deviation = match qops::phase_distance(block, target) {
        Ok(d) => d,
        Err(e) => return fail(e.to_string()),
    };
    let phase = qops::relative_phase(target, block)
        .map(qops::wrap_phase)
        .unwrap_or(0.0);
    VerificationReport {
        gate: gate.to_string(),
        model: PropagationModel::Ideal,
        deviation,
        extracted_global_phase: phase,
        wire_return_defect: leakage,
        pass: deviation < VERIFY_TOL && leakage < VERIFY_TOL,
        error: None,
    }
}

/// Propagates `spec.sequence` in the ideal model and scores it. Failures are
/// reported, never raised.
pub fn verify_gate(spec: &GateSpec) -> VerificationReport {
    let run = || -> Result<(ComplexMatrix, f64)> {
        let (u, array) = ideal_unitary(&spec.sequence, spec.layout)?;
        data_subspace_unitary(&u, &array)
    };
    match run() {
        Ok((block, leakage)) => {
            compare_to_target(&spec.name, &block, leakage, &spec.target_unitary)
        }
        Err(e) => VerificationReport {
            gate: spec.name.clone(),
            model: PropagationModel::Ideal,
            deviation: f64::INFINITY,
            extracted_global_phase: 0.0,
            wire_return_defect: f64::INFINITY,
            pass: false,
            error: Some(e.to_string()),
        },
    }
}

/// Free parameters for parametric catalog entries.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GateParams {
    /// Phase of `Ph(α)` and the CP family.
    pub alpha: f64,
    /// Rotation angle for `R` and base-pair rotations.
    pub theta: f64,
    /// Phase of `P(φ)` and the rotation axis for `R` and base-pair rotations.
    pub phi: f64,
}

impl Default for GateParams {
    fn default() -> Self {
        Self {
            alpha: PI,
            theta: FRAC_PI_2,
            phi: FRAC_PI_4,
        }
    }
}

/// Every catalog name accepted by [`gate_by_name`].
pub const GATE_NAMES: &[&str] = &[
    "x-a",
    "x-b",
    "y-a",
    "y-b",
    "z-a",
    "z-b",
    "h-a",
    "h-b",
    "p-a",
    "p-b",
    "s-a",
    "s-b",
    "t-a",
    "t-b",
    "r-a",
    "r-b",
    "ph",
    "cx-ab",
    "cx-ba",
    "cy-ab",
    "cy-ba",
    "cz",
    "swap",
    "cp00",
    "cp01",
    "cp10",
    "cp11",
    "m00",
    "m01",
    "m10",
    "m11",
    "r00-01",
    "r00-11",
    "r01-10",
    "r01-11",
    "r10-11",
    "ccz-y",
    "toffoli-y",
    "ccz-chain",
    "toffoli-chain",
];

pub fn gate_by_name(name: &str, params: &GateParams) -> Result<Gate> {
    let lower = name.to_ascii_lowercase();
    let one =
        |g: OneQubitGate, q: &str| Gate::One(g, if q == "a" { DataQubit::A } else { DataQubit::B });
    let gate = match lower.as_str() {
        "cx-ab" | "cnot" => Gate::Two(TwoQubitGate::CX(Direction::AB)),
        "cx-ba" => Gate::Two(TwoQubitGate::CX(Direction::BA)),
        "cy-ab" => Gate::Two(TwoQubitGate::CY(Direction::AB)),
        "cy-ba" => Gate::Two(TwoQubitGate::CY(Direction::BA)),
        "cz" => Gate::Two(TwoQubitGate::CZ),
        "swap" => Gate::Two(TwoQubitGate::Swap),
        "cp00" => Gate::Two(TwoQubitGate::CP00(params.alpha)),
        "cp01" => Gate::Two(TwoQubitGate::CP01(params.alpha)),
        "cp10" => Gate::Two(TwoQubitGate::CP10(params.alpha)),
        "cp11" | "cp" => Gate::Two(TwoQubitGate::CP11(params.alpha)),
        "m00" => Gate::Inversion(Inversion::M00),
        "m01" => Gate::Inversion(Inversion::M01),
        "m10" => Gate::Inversion(Inversion::M10),
        "m11" => Gate::Inversion(Inversion::M11),
        "ph" => Gate::GlobalPhase(params.alpha),
        "ccz-y" => Gate::Multi(MultiQubitGate::CczY),
        "toffoli-y" | "toff-y" => Gate::Multi(MultiQubitGate::ToffY),
        "ccz-chain" => Gate::Multi(MultiQubitGate::CczChain),
        "toffoli-chain" | "toff-chain" => Gate::Multi(MultiQubitGate::ToffChain),
        s if s.len() == 3 && s.as_bytes()[1] == b'-' && matches!(&s[2..], "a" | "b") => {
            let q = &s[2..];
            let g = match &s[..1] {
                "x" => OneQubitGate::X,
                "y" => OneQubitGate::Y,
                "z" => OneQubitGate::Z,
                "h" => OneQubitGate::H,
                "p" => OneQubitGate::P(params.phi),
                "s" => OneQubitGate::S,
                "t" => OneQubitGate::T,
                "r" => OneQubitGate::R {
                    theta: params.theta,
                    phi: params.phi,
                },
                _ => return Err(unknown_gate(name)),
            };
            one(g, q)
        }
        s if s.starts_with('r') && s.len() == 6 => match s[1..].parse::<BasisPair>() {
            Ok(pair) => Gate::PairRotation {
                pair,
                theta: params.theta,
                phi: params.phi,
            },
            Err(Error::UnsupportedPair(p))
                if p.chars().filter(|c| c.is_ascii_digit()).count() == 4 =>
            {
                return Err(Error::UnsupportedPair(p))
            }
            Err(_) => return Err(unknown_gate(name)),
        },
        _ => return Err(unknown_gate(name)),
    };
    Ok(gate)
}

fn unknown_gate(name: &str) -> Error {
    Error::UnknownGate {
        name: name.to_string(),
        valid: GATE_NAMES.join(", "),
    }
}

/// The full named catalog at the given parameters.
pub fn catalog(params: &GateParams) -> Result<Vec<GateSpec>> {
    GATE_NAMES
        .iter()
        .map(|name| GateSpec::new(*name, gate_by_name(name, params)?))
        .collect()
}

/// Angles solved for one arbitrary-state preparation.
#[derive(Debug, Clone, PartialEq)]
pub struct StatePreparation {
    /// `(pair, Θ, φ)` in temporal order.
    pub rotations: Vec<(BasisPair, f64, f64)>,
    pub sequence: PulseSequence,
}

/// Pair-rotation recipe taking |00⟩ to `target` up to a global phase.
///
/// Temporal order: R₀₀,₁₁ splits |00⟩ into |00⟩ and |11⟩, R₁₀,₁₁ moves part of
/// the |11⟩ amplitude onto |10⟩, and R₀₀,₀₁ moves part of the |00⟩ amplitude
/// onto |01⟩. Amplitudes are rephased so that `a₀₀` is real and nonnegative.
pub fn prepare_state(target: &[Complex64; 4]) -> Result<StatePreparation> {
    let norm = target.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
    if !(norm > 0.0) || !norm.is_finite() {
        return Err(Error::InvalidParameter {
            name: "target",
            reason: "state must have a finite nonzero norm".into(),
        });
    }
    let ref_phase = if target[0].norm() > 0.0 {
        target[0].arg()
    } else {
        0.0
    };
    let unphase = Complex64::from_polar(1.0 / norm, -ref_phase);
    let a: Vec<Complex64> = target.iter().map(|z| z * unphase).collect();
    let mag: Vec<f64> = a.iter().map(|z| z.norm()).collect();
    let arg = |z: Complex64| if z.norm() > 0.0 { z.arg() } else { 0.0 };

    // a00 = c1·c3, a01 = −i e^{iφ3} c1 s3, a10 = −e^{i(φ1−φ2)} s1 s2, a11 = −i e^{iφ1} s1 c2
    let theta1 = 2.0 * (mag[2].hypot(mag[3])).atan2(mag[0].hypot(mag[1]));
    let theta2 = 2.0 * mag[2].atan2(mag[3]);
    let theta3 = 2.0 * mag[1].atan2(mag[0]);
    let phi1 = arg(a[3]) + FRAC_PI_2;
    let phi2 = phi1 + PI - arg(a[2]);
    let phi3 = arg(a[1]) + FRAC_PI_2;

    let rotations = vec![
        (BasisPair::P00_11, theta1, phi1),
        (BasisPair::P10_11, theta2, phi2),
        (BasisPair::P00_01, theta3, phi3),
    ];
    let mut sequence = PulseSequence::default();
    for &(pair, theta, phi) in &rotations {
        sequence = sequence.then(&pair_rotation_sequence(pair, theta, phi)?);
    }
    Ok(StatePreparation {
        rotations,
        sequence,
    })
}
