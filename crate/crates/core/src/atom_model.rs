//! Atom geometry, physical constants and pairwise interaction strengths.
//!
//! Units: distances in μm, angular frequencies in rad/μs (so a frequency of
//! `f` MHz is stored as `2π·f`), interaction coefficients in rad·μm^k/μs.

use std::collections::BTreeSet;
use std::f64::consts::PI;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Converts a frequency in MHz to an angular frequency in rad/μs.
pub fn mhz(f: f64) -> f64 {
    2.0 * PI * f
}

/// Converts an angular frequency in rad/μs back to MHz.
pub fn to_mhz(omega: f64) -> f64 {
    omega / (2.0 * PI)
}

/// Relative slack on the lattice constant when flagging blockade links.
pub const BLOCKADE_EPS: f64 = 1e-6;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Role {
    Data,
    Wire,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Atom {
    pub label: String,
    pub role: Role,
    /// Position in the array plane, μm.
    pub position: [f64; 2],
}

impl Atom {
    pub fn new(label: impl Into<String>, role: Role, x: f64, y: f64) -> Self {
        Self {
            label: label.into(),
            role,
            position: [x, y],
        }
    }

    pub fn distance(&self, other: &Atom) -> f64 {
        let dx = self.position[0] - other.position[0];
        let dy = self.position[1] - other.position[1];
        dx.hypot(dy)
    }
}

/// Ordered atoms; the list order is the tensor-factor order of the Hilbert
/// space (first atom is the most significant bit of a basis index).
#[derive(Debug, Clone, PartialEq)]
pub struct AtomArray {
    atoms: Vec<Atom>,
    lattice_constant: f64,
}

impl AtomArray {
    pub fn new(atoms: Vec<Atom>, lattice_constant: f64) -> Result<Self> {
        if !(lattice_constant > 0.0) || !lattice_constant.is_finite() {
            return Err(Error::NonPositiveDistance(lattice_constant));
        }
        let mut seen = BTreeSet::new();
        for a in &atoms {
            if !seen.insert(a.label.as_str()) {
                return Err(Error::DuplicateLabel(a.label.clone()));
            }
        }
        if !atoms.iter().any(|a| a.role == Role::Data) {
            return Err(Error::NoDataAtom);
        }
        Ok(Self {
            atoms,
            lattice_constant,
        })
    }

    pub fn atoms(&self) -> &[Atom] {
        &self.atoms
    }

    pub fn len(&self) -> usize {
        self.atoms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.atoms.is_empty()
    }

    /// Hilbert-space dimension `2^N`.
    pub fn dim(&self) -> usize {
        1 << self.atoms.len()
    }

    pub fn lattice_constant(&self) -> f64 {
        self.lattice_constant
    }

    pub fn index_of(&self, label: &str) -> Result<usize> {
        self.atoms
            .iter()
            .position(|a| a.label == label)
            .ok_or_else(|| Error::UnknownLabel(label.to_string()))
    }

    pub fn data_indices(&self) -> Vec<usize> {
        self.indices_with(Role::Data)
    }

    pub fn wire_indices(&self) -> Vec<usize> {
        self.indices_with(Role::Wire)
    }

    fn indices_with(&self, role: Role) -> Vec<usize> {
        self.atoms
            .iter()
            .enumerate()
            .filter(|(_, a)| a.role == role)
            .map(|(i, _)| i)
            .collect()
    }

    /// Bit value of atom `atom` in basis index `state`.
    pub fn bit(&self, state: usize, atom: usize) -> usize {
        (state >> (self.atoms.len() - 1 - atom)) & 1
    }

    /// Basis index with every wire in |0⟩ and the data atoms set from
    /// `data_state` (data atoms in array order, first is most significant).
    pub fn embed_data_state(&self, data_state: usize) -> usize {
        let data = self.data_indices();
        let n = self.atoms.len();
        data.iter().enumerate().fold(0, |acc, (j, &atom)| {
            let b = (data_state >> (data.len() - 1 - j)) & 1;
            acc | (b << (n - 1 - atom))
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Scheme {
    /// Every pair interacts through `C6/d^6`.
    #[serde(rename = "vdw")]
    VdW,
    /// Wire–data pairs interact resonantly through `C3/d^3`.
    #[serde(rename = "foerster")]
    Foerster,
}

impl fmt::Display for Scheme {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Scheme::VdW => "vdw",
            Scheme::Foerster => "foerster",
        })
    }
}

impl FromStr for Scheme {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "vdw" | "van-der-waals" => Ok(Scheme::VdW),
            "foerster" | "forster" | "förster" => Ok(Scheme::Foerster),
            _ => Err(Error::InvalidParameter {
                name: "scheme",
                reason: format!("{s:?} is not one of vdw, foerster"),
            }),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PhysicalParams {
    /// Rabi angular frequency, rad/μs.
    pub omega: f64,
    /// |C6|, rad·μm⁶/μs.
    pub c6: f64,
    /// C3, rad·μm³/μs.
    pub c3: f64,
    /// Rydberg lifetime, μs.
    pub tau: f64,
    pub scheme: Scheme,
}

impl PhysicalParams {
    /// Ω = 2π·2 MHz.
    pub const DEFAULT_OMEGA_MHZ: f64 = 2.0;
    /// |C6| = 2π·732 GHz·μm⁶ (69S₁/₂).
    pub const DEFAULT_C6_GHZ: f64 = 732.0;
    /// C3 = 2π·12.32 GHz·μm³.
    pub const DEFAULT_C3_GHZ: f64 = 12.32;
    /// Not a measured value: chosen so that `9π/(4Ωτ) ≈ 4×10⁻³` at the default Ω.
    pub const DEFAULT_TAU_US: f64 = 141.0;

    /// Builds parameters from laboratory units (MHz, GHz·μm^k, μs).
    pub fn from_lab_units(
        omega_mhz: f64,
        c6_ghz: f64,
        c3_ghz: f64,
        tau_us: f64,
        scheme: Scheme,
    ) -> Result<Self> {
        let p = Self {
            omega: mhz(omega_mhz),
            c6: mhz(c6_ghz * 1e3),
            c3: mhz(c3_ghz * 1e3),
            tau: tau_us,
            scheme,
        };
        p.validate()?;
        Ok(p)
    }

    pub fn with_scheme(self, scheme: Scheme) -> Self {
        Self { scheme, ..self }
    }

    pub fn validate(&self) -> Result<()> {
        for (name, v) in [
            ("omega", self.omega),
            ("c6", self.c6),
            ("c3", self.c3),
            ("tau", self.tau),
        ] {
            if !(v > 0.0) || v.is_nan() {
                return Err(Error::InvalidParameter {
                    name,
                    reason: format!("must be positive, got {v}"),
                });
            }
        }
        Ok(())
    }
}

impl Default for PhysicalParams {
    fn default() -> Self {
        Self {
            omega: mhz(Self::DEFAULT_OMEGA_MHZ),
            c6: mhz(Self::DEFAULT_C6_GHZ * 1e3),
            c3: mhz(Self::DEFAULT_C3_GHZ * 1e3),
            tau: Self::DEFAULT_TAU_US,
            scheme: Scheme::VdW,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PairKind {
    WireData,
    DataData,
    WireWire,
}

impl PairKind {
    pub fn of(a: Role, b: Role) -> Self {
        match (a, b) {
            (Role::Data, Role::Data) => PairKind::DataData,
            (Role::Wire, Role::Wire) => PairKind::WireWire,
            _ => PairKind::WireData,
        }
    }
}

/// Interaction strength of a Rydberg pair at `distance` μm.
///
/// Under the Förster scheme only wire–data pairs use the resonant `C3/d³`
/// coupling; all other pairs keep the van der Waals `C6/d⁶` form.
pub fn pair_strength(
    scheme: Scheme,
    distance: f64,
    params: &PhysicalParams,
    kind: PairKind,
) -> Result<f64> {
    if !(distance > 0.0) || !distance.is_finite() {
        return Err(Error::NonPositiveDistance(distance));
    }
    Ok(match (scheme, kind) {
        (Scheme::Foerster, PairKind::WireData) => params.c3 / distance.powi(3),
        _ => params.c6 / distance.powi(6),
    })
}

/// Symmetric all-pairs interaction table plus the blockade links used by the
/// ideal model.
#[derive(Debug, Clone, PartialEq)]
pub struct InteractionGraph {
    n: usize,
    strengths: Vec<f64>,
    blockaded: BTreeSet<(usize, usize)>,
}

impl InteractionGraph {
    /// Graph with explicit strengths. `pairs` and `blockaded` use atom indices;
    /// unspecified pairs have zero strength.
    pub fn from_pairs(
        n: usize,
        pairs: impl IntoIterator<Item = ((usize, usize), f64)>,
        blockaded: impl IntoIterator<Item = (usize, usize)>,
    ) -> Result<Self> {
        let mut g = Self {
            n,
            strengths: vec![0.0; n * n],
            blockaded: BTreeSet::new(),
        };
        for ((i, j), v) in pairs {
            if i >= n || j >= n || i == j {
                return Err(Error::InvalidParameter {
                    name: "pair",
                    reason: format!("({i}, {j}) is not a pair of distinct atoms below {n}"),
                });
            }
            if !(v >= 0.0) {
                return Err(Error::InvalidParameter {
                    name: "strength",
                    reason: format!("interaction must be nonnegative, got {v}"),
                });
            }
            g.strengths[i * n + j] = v;
            g.strengths[j * n + i] = v;
        }
        for (i, j) in blockaded {
            if i >= n || j >= n || i == j {
                return Err(Error::InvalidParameter {
                    name: "blockaded",
                    reason: format!("({i}, {j}) is not a pair of distinct atoms below {n}"),
                });
            }
            g.blockaded.insert((i.min(j), i.max(j)));
        }
        Ok(g)
    }

    pub fn atom_count(&self) -> usize {
        self.n
    }

    pub fn strength(&self, i: usize, j: usize) -> f64 {
        self.strengths[i * self.n + j]
    }

    pub fn is_blockaded(&self, i: usize, j: usize) -> bool {
        self.blockaded.contains(&(i.min(j), i.max(j)))
    }

    pub fn blockaded_pairs(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.blockaded.iter().copied()
    }

    /// Atoms that blockade atom `i`.
    pub fn blockade_neighbors(&self, i: usize) -> Vec<usize> {
        (0..self.n)
            .filter(|&j| j != i && self.is_blockaded(i, j))
            .collect()
    }

    /// All pairs `i < j` with nonzero strength.
    pub fn interacting_pairs(&self) -> impl Iterator<Item = (usize, usize, f64)> + '_ {
        (0..self.n).flat_map(move |i| {
            ((i + 1)..self.n).filter_map(move |j| {
                let v = self.strength(i, j);
                (v != 0.0).then_some((i, j, v))
            })
        })
    }

    /// Copy with the strength of every pair rejected by `keep(i, j)` (`i < j`)
    /// set to zero. Blockade links are preserved.
    pub fn filtered(&self, mut keep: impl FnMut(usize, usize) -> bool) -> Self {
        let mut g = self.clone();
        for i in 0..self.n {
            for j in 0..self.n {
                if i != j && !keep(i.min(j), i.max(j)) {
                    g.strengths[i * self.n + j] = 0.0;
                }
            }
        }
        g
    }
}

/// All-pairs interaction graph from geometry. Pairs within the lattice
/// constant (up to [`BLOCKADE_EPS`] relative slack) are blockade links.
pub fn build_interaction_graph(
    array: &AtomArray,
    params: &PhysicalParams,
) -> Result<InteractionGraph> {
    let atoms = array.atoms();
    let n = atoms.len();
    let cutoff = array.lattice_constant() * (1.0 + BLOCKADE_EPS);
    let mut pairs = Vec::new();
    let mut blockaded = Vec::new();
    for i in 0..n {
        for j in (i + 1)..n {
            let d = atoms[i].distance(&atoms[j]);
            if d <= 0.0 {
                return Err(Error::CoincidentAtoms(
                    atoms[i].label.clone(),
                    atoms[j].label.clone(),
                ));
            }
            let kind = PairKind::of(atoms[i].role, atoms[j].role);
            pairs.push(((i, j), pair_strength(params.scheme, d, params, kind)?));
            if d <= cutoff {
                blockaded.push((i, j));
            }
        }
    }
    InteractionGraph::from_pairs(n, pairs, blockaded)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Layout {
    /// `A – W – B` on a line.
    #[serde(rename = "chain3")]
    Chain3,
    /// `A – W1 – B – W2 – C` on a line.
    #[serde(rename = "chain5")]
    Chain5,
    /// Data atoms `A, B, C` at 90°, 210°, 330° around a central wire `W`.
    #[serde(rename = "yshape")]
    YShape,
}

impl Layout {
    pub const ALL: [Layout; 3] = [Layout::Chain3, Layout::Chain5, Layout::YShape];

    pub fn name(&self) -> &'static str {
        match self {
            Layout::Chain3 => "chain3",
            Layout::Chain5 => "chain5",
            Layout::YShape => "yshape",
        }
    }

    pub fn data_qubit_count(&self) -> usize {
        match self {
            Layout::Chain3 => 2,
            Layout::Chain5 | Layout::YShape => 3,
        }
    }
}

impl fmt::Display for Layout {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Layout {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().replace(['-', '_'], "").as_str() {
            "chain3" => Ok(Layout::Chain3),
            "chain5" => Ok(Layout::Chain5),
            "yshape" | "y" => Ok(Layout::YShape),
            _ => Err(Error::UnknownLayout(s.to_string())),
        }
    }
}

/// Named geometry with lattice constant `d` μm.
pub fn builtin_layout(layout: Layout, d: f64) -> Result<AtomArray> {
    if !(d > 0.0) || !d.is_finite() {
        return Err(Error::NonPositiveDistance(d));
    }
    let atoms = match layout {
        Layout::Chain3 => vec![
            Atom::new("A", Role::Data, 0.0, 0.0),
            Atom::new("W", Role::Wire, d, 0.0),
            Atom::new("B", Role::Data, 2.0 * d, 0.0),
        ],
        Layout::Chain5 => vec![
            Atom::new("A", Role::Data, 0.0, 0.0),
            Atom::new("W1", Role::Wire, d, 0.0),
            Atom::new("B", Role::Data, 2.0 * d, 0.0),
            Atom::new("W2", Role::Wire, 3.0 * d, 0.0),
            Atom::new("C", Role::Data, 4.0 * d, 0.0),
        ],
        Layout::YShape => {
            let at = |deg: f64| {
                let r = deg.to_radians();
                (d * r.cos(), d * r.sin())
            };
            let (ax, ay) = at(90.0);
            let (bx, by) = at(210.0);
            let (cx, cy) = at(330.0);
            vec![
                Atom::new("A", Role::Data, ax, ay),
                Atom::new("B", Role::Data, bx, by),
                Atom::new("C", Role::Data, cx, cy),
                Atom::new("W", Role::Wire, 0.0, 0.0),
            ]
        }
    };
    AtomArray::new(atoms, d)
}
