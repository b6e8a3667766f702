//! Atom-addressing pulses, the driven Rydberg Hamiltonian, and the ideal
//! (infinite blockade) and realistic (finite interaction) propagators.

use std::f64::consts::PI;
use std::fmt;

use num_complex::Complex64;

use crate::atom_model::{AtomArray, InteractionGraph, PhysicalParams};
use crate::error::{Error, Result};
use crate::qops::{self, c64, ComplexMatrix};

/// One square pulse of area `theta` and laser phase `phi`, driving every
/// atom in `targets` simultaneously.
#[derive(Debug, Clone, PartialEq)]
pub struct Pulse {
    pub targets: Vec<String>,
    pub theta: f64,
    pub phi: f64,
}

impl Pulse {
    pub fn new<S: Into<String>>(
        targets: impl IntoIterator<Item = S>,
        theta: f64,
        phi: f64,
    ) -> Result<Self> {
        let p = Self {
            targets: targets.into_iter().map(Into::into).collect(),
            theta,
            phi,
        };
        p.validate()?;
        Ok(p)
    }

    /// Single-target pulse. `theta` must be nonnegative.
    pub fn on(target: &str, theta: f64, phi: f64) -> Self {
        debug_assert!(theta >= 0.0);
        Self {
            targets: vec![target.to_string()],
            theta,
            phi,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.targets.is_empty() {
            return Err(Error::EmptyPulse);
        }
        if !(self.theta >= 0.0) || !self.theta.is_finite() {
            return Err(Error::InvalidParameter {
                name: "theta",
                reason: format!(
                    "pulse area must be finite and nonnegative, got {}",
                    self.theta
                ),
            });
        }
        if !self.phi.is_finite() {
            return Err(Error::InvalidParameter {
                name: "phi",
                reason: "laser phase must be finite".into(),
            });
        }
        for (k, t) in self.targets.iter().enumerate() {
            if self.targets[..k].contains(t) {
                return Err(Error::DuplicateLabel(t.clone()));
            }
        }
        Ok(())
    }

    /// The Hermitian conjugate: same area, phase advanced by π.
    pub fn inverse(&self) -> Self {
        Self {
            targets: self.targets.clone(),
            theta: self.theta,
            phi: self.phi + PI,
        }
    }

    /// Duration `Θ/Ω` in μs.
    pub fn duration(&self, omega: f64) -> f64 {
        self.theta / omega
    }
}

impl fmt::Display for Pulse {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{}(Θ={:.6}, φ={:.6})",
            self.targets.join(""),
            self.theta,
            self.phi
        )
    }
}

/// Pulses in temporal order: the first element is applied first.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct PulseSequence {
    pub pulses: Vec<Pulse>,
}

impl PulseSequence {
    pub fn new(pulses: Vec<Pulse>) -> Self {
        Self { pulses }
    }

    pub fn len(&self) -> usize {
        self.pulses.len()
    }

    pub fn is_empty(&self) -> bool {
        self.pulses.is_empty()
    }

    pub fn iter(&self) -> std::slice::Iter<'_, Pulse> {
        self.pulses.iter()
    }

    pub fn total_duration(&self, omega: f64) -> f64 {
        self.pulses.iter().map(|p| p.duration(omega)).sum()
    }

    /// `self` followed by `later`.
    pub fn then(mut self, later: &PulseSequence) -> Self {
        self.pulses.extend(later.pulses.iter().cloned());
        self
    }

    /// Sequence implementing the inverse operation.
    pub fn inverse(&self) -> Self {
        Self::new(self.pulses.iter().rev().map(Pulse::inverse).collect())
    }

    /// Replaces every full-turn pulse (Θ = 2π) by two back-to-back π pulses.
    pub fn split_full_turns(&self) -> Self {
        let mut out = Vec::with_capacity(self.pulses.len());
        for p in &self.pulses {
            if (p.theta - 2.0 * PI).abs() < 1e-12 {
                let half = Pulse {
                    theta: PI,
                    ..p.clone()
                };
                out.push(half.clone());
                out.push(half);
            } else {
                out.push(p.clone());
            }
        }
        Self::new(out)
    }
}

impl FromIterator<Pulse> for PulseSequence {
    fn from_iter<I: IntoIterator<Item = Pulse>>(iter: I) -> Self {
        Self::new(iter.into_iter().collect())
    }
}

impl<'a> IntoIterator for &'a PulseSequence {
    type Item = &'a Pulse;
    type IntoIter = std::slice::Iter<'a, Pulse>;

    fn into_iter(self) -> Self::IntoIter {
        self.pulses.iter()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PropagationModel {
    /// Infinite blockade on graph links, no interaction phases.
    Ideal,
    /// Exact evolution under the driven Hamiltonian with finite couplings.
    Realistic,
}

/// `R(Θ,φ) = exp(-iΘ/2 (cos φ σx + sin φ σy))`, so that
/// `R|0⟩ = cos(Θ/2)|0⟩ − i e^{iφ} sin(Θ/2)|1⟩`.
pub fn single_qubit_rotation(theta: f64, phi: f64) -> ComplexMatrix {
    let c = (theta / 2.0).cos();
    let s = (theta / 2.0).sin();
    let minus_i = c64(0.0, -1.0);
    ComplexMatrix::from_row_slice(
        2,
        2,
        &[
            c64(c, 0.0),
            minus_i * Complex64::from_polar(s, -phi),
            minus_i * Complex64::from_polar(s, phi),
            c64(c, 0.0),
        ],
    )
}

fn target_indices(p: &Pulse, array: &AtomArray) -> Result<Vec<usize>> {
    p.validate()?;
    p.targets.iter().map(|t| array.index_of(t)).collect()
}

fn check_graph(array: &AtomArray, graph: &InteractionGraph) -> Result<()> {
    if graph.atom_count() != array.len() {
        return Err(Error::DimensionMismatch {
            expected: (array.len(), array.len()),
            found: (graph.atom_count(), graph.atom_count()),
        });
    }
    Ok(())
}

/// Diagonal of `Σ_{i<j} V_ij n_i n_j` over the computational basis.
pub fn interaction_diagonal(array: &AtomArray, graph: &InteractionGraph) -> Vec<f64> {
    let pairs: Vec<_> = graph.interacting_pairs().collect();
    (0..array.dim())
        .map(|s| {
            pairs
                .iter()
                .filter(|&&(i, j, _)| array.bit(s, i) == 1 && array.bit(s, j) == 1)
                .map(|&(_, _, v)| v)
                .sum()
        })
        .collect()
}

/// `H = Σ_{i∈targets} (Ω/2)(cos φ σx_i + sin φ σy_i) + Σ_{i<j} V_ij n_i n_j`.
pub fn pulse_hamiltonian(
    p: &Pulse,
    array: &AtomArray,
    graph: &InteractionGraph,
    params: &PhysicalParams,
) -> Result<ComplexMatrix> {
    check_graph(array, graph)?;
    let targets = target_indices(p, array)?;
    let dim = array.dim();
    let n = array.len();
    let mut h = ComplexMatrix::zeros(dim, dim);
    for (s, v) in interaction_diagonal(array, graph).into_iter().enumerate() {
        h[(s, s)] = c64(v, 0.0);
    }
    let half = params.omega / 2.0;
    // ⟨1|n̂·σ|0⟩ = e^{iφ}, ⟨0|n̂·σ|1⟩ = e^{-iφ}
    let up = Complex64::from_polar(half, p.phi);
    for &t in &targets {
        let mask = 1 << (n - 1 - t);
        for s in 0..dim {
            if s & mask == 0 {
                let e = s | mask;
                h[(e, s)] += up;
                h[(s, e)] += up.conj();
            }
        }
    }
    Ok(h)
}

/// Blockade-conditional rotation: each target rotates by `R(Θ,φ)` if and only
/// if all of its blockade neighbours are in |0⟩; nothing else happens.
pub fn ideal_propagate(
    p: &Pulse,
    array: &AtomArray,
    graph: &InteractionGraph,
) -> Result<ComplexMatrix> {
    check_graph(array, graph)?;
    let targets = target_indices(p, array)?;
    for (k, &i) in targets.iter().enumerate() {
        for &j in &targets[..k] {
            if graph.is_blockaded(i, j) {
                return Err(Error::BlockadedTargets(
                    array.atoms()[j].label.clone(),
                    array.atoms()[i].label.clone(),
                ));
            }
        }
    }
    let r = single_qubit_rotation(p.theta, p.phi);
    let n = array.len();
    let dim = array.dim();
    let mut u = qops::identity(dim);
    for &t in &targets {
        let neighbors = graph.blockade_neighbors(t);
        let mask = 1 << (n - 1 - t);
        let mut step = ComplexMatrix::zeros(dim, dim);
        for s in 0..dim {
            let free = neighbors.iter().all(|&j| array.bit(s, j) == 0);
            if free {
                let b = array.bit(s, t);
                let s0 = s & !mask;
                let s1 = s | mask;
                step[(s0, s)] = r[(0, b)];
                step[(s1, s)] = r[(1, b)];
            } else {
                step[(s, s)] = c64(1.0, 0.0);
            }
        }
        u = step * u;
    }
    Ok(u)
}

/// Exact evolution `exp(−i H Θ/Ω)` under [`pulse_hamiltonian`].
pub fn realistic_propagate(
    p: &Pulse,
    array: &AtomArray,
    graph: &InteractionGraph,
    params: &PhysicalParams,
) -> Result<ComplexMatrix> {
    params.validate()?;
    let h = pulse_hamiltonian(p, array, graph, params)?;
    qops::unitary_exp(&h, p.duration(params.omega))
}

/// Ordered product `U_n ⋯ U_2 U_1` of the per-pulse propagators.
pub fn sequence_propagate(
    seq: &PulseSequence,
    model: PropagationModel,
    array: &AtomArray,
    graph: &InteractionGraph,
    params: &PhysicalParams,
) -> Result<ComplexMatrix> {
    seq.iter().try_fold(qops::identity(array.dim()), |u, p| {
        let step = match model {
            PropagationModel::Ideal => ideal_propagate(p, array, graph)?,
            PropagationModel::Realistic => realistic_propagate(p, array, graph, params)?,
        };
        Ok(step * u)
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::atom_model::{build_interaction_graph, builtin_layout, mhz, Layout};
    use crate::qops::{
        identity, is_unitary, kron, max_abs, phase_distance, sigma_x, ComplexVector,
    };
    use proptest::prelude::*;

    fn chain3() -> (AtomArray, InteractionGraph, PhysicalParams) {
        let params = PhysicalParams::default();
        let array = builtin_layout(Layout::Chain3, 7.0).unwrap();
        let graph = build_interaction_graph(&array, &params).unwrap();
        (array, graph, params)
    }

    /// Nearest-neighbour-only Chain3 graph with wire–data strength `v`.
    fn chain3_nn(v: f64) -> InteractionGraph {
        InteractionGraph::from_pairs(3, [((0, 1), v), ((1, 2), v)], [(0, 1), (1, 2)]).unwrap()
    }

    fn ket(dim: usize, s: usize) -> ComplexVector {
        let mut v = ComplexVector::zeros(dim);
        v[s] = c64(1.0, 0.0);
        v
    }

    #[test]
    fn rotation_examples() {
        let r = single_qubit_rotation(PI, 0.0);
        assert!(max_abs(&(r - sigma_x() * c64(0.0, -1.0))) < 1e-15);
        let r = single_qubit_rotation(PI, PI / 2.0);
        let expected = ComplexMatrix::from_row_slice(
            2,
            2,
            &[c64(0., 0.), c64(-1., 0.), c64(1., 0.), c64(0., 0.)],
        );
        assert!(max_abs(&(r - expected)) < 1e-15);
        for phi in [0.0, 0.3, 2.0, -1.1] {
            let r = single_qubit_rotation(2.0 * PI, phi);
            assert!(max_abs(&(r + identity(2))) < 1e-15);
        }
    }

    #[test]
    fn rotation_matches_generator() {
        let (theta, phi) = (1.3_f64, 0.7_f64);
        let h = (sigma_x() * c64(phi.cos(), 0.0) + crate::qops::sigma_y() * c64(phi.sin(), 0.0))
            * c64(0.5, 0.0);
        let u = qops::unitary_exp(&h, theta).unwrap();
        assert!(max_abs(&(u - single_qubit_rotation(theta, phi))) < 1e-12);
    }

    #[test]
    fn hamiltonian_elements_chain3() {
        let (array, graph, params) = chain3();
        let h = pulse_hamiltonian(&Pulse::on("W", PI, 0.0), &array, &graph, &params).unwrap();
        assert!(qops::is_hermitian(&h, 1e-12));
        // |00⟩_AB|0⟩_W = 0b000 ↔ |00⟩_AB|1⟩_W = 0b010
        assert!((h[(0b010, 0b000)] - c64(params.omega / 2.0, 0.0)).norm() < 1e-12);
        let v = graph.strength(0, 1);
        // |10⟩_AB|1⟩_W = 0b110
        assert!((h[(0b110, 0b110)].re - v).abs() < 1e-9);
        // |11⟩_AB|0⟩_W = 0b101 carries only the A–B coupling
        assert!((h[(0b101, 0b101)].re - v / 64.0).abs() < 1e-9);
        assert!(matches!(
            pulse_hamiltonian(&Pulse::on("Q", PI, 0.0), &array, &graph, &params),
            Err(Error::UnknownLabel(_))
        ));
    }

    #[test]
    fn hamiltonian_without_interactions() {
        let (array, _, params) = chain3();
        let free = InteractionGraph::from_pairs(3, [], []).unwrap();
        let h = pulse_hamiltonian(&Pulse::on("A", PI, 0.0), &array, &free, &params).unwrap();
        let expected =
            kron(&kron(&sigma_x(), &identity(2)), &identity(2)) * c64(params.omega / 2.0, 0.0);
        assert!(max_abs(&(h - expected)) < 1e-12);
    }

    #[test]
    fn ideal_wire_pulse_examples() {
        let (array, graph, _) = chain3();
        let u = ideal_propagate(&Pulse::on("W", PI, 0.0), &array, &graph).unwrap();
        let out = &u * ket(8, 0b000);
        assert!((out[0b010] - c64(0.0, -1.0)).norm() < 1e-15);
        // |10⟩_AB|0⟩_W is blockaded
        let out = &u * ket(8, 0b100);
        assert!((out[0b100] - c64(1.0, 0.0)).norm() < 1e-15);
        assert!(is_unitary(&u, 1e-12));
    }

    #[test]
    fn ideal_data_pulse_acts_locally() {
        let (array, graph, _) = chain3();
        let u = ideal_propagate(&Pulse::on("A", PI, 0.0), &array, &graph).unwrap();
        // restrict to W = |0⟩: indices |a 0 b⟩
        let idx = [0b000, 0b001, 0b100, 0b101];
        let block = ComplexMatrix::from_fn(4, 4, |i, j| u[(idx[i], idx[j])]);
        let expected = kron(&(sigma_x() * c64(0.0, -1.0)), &identity(2));
        assert!(max_abs(&(block - expected)) < 1e-15);
    }

    #[test]
    fn ideal_rejects_blockaded_simultaneous_targets() {
        let (array, graph, _) = chain3();
        let p = Pulse::new(["A", "W"], PI, 0.0).unwrap();
        assert!(matches!(
            ideal_propagate(&p, &array, &graph),
            Err(Error::BlockadedTargets(..))
        ));
        let ok = Pulse::new(["A", "B"], PI, 0.0).unwrap();
        let both = ideal_propagate(&ok, &array, &graph).unwrap();
        let seq = sequence_propagate(
            &PulseSequence::new(vec![Pulse::on("A", PI, 0.0), Pulse::on("B", PI, 0.0)]),
            PropagationModel::Ideal,
            &array,
            &graph,
            &PhysicalParams::default(),
        )
        .unwrap();
        assert!(max_abs(&(both - seq)) < 1e-15);
    }

    #[test]
    fn pulse_validation() {
        assert!(matches!(
            Pulse::new(Vec::<String>::new(), PI, 0.0),
            Err(Error::EmptyPulse)
        ));
        assert!(Pulse::new(["A"], -0.1, 0.0).is_err());
        assert!(Pulse::new(["A", "A"], 0.1, 0.0).is_err());
    }

    #[test]
    fn realistic_without_interactions_is_rotation() {
        let (array, _, params) = chain3();
        let free = InteractionGraph::from_pairs(3, [], []).unwrap();
        let u = realistic_propagate(&Pulse::on("B", 1.1, 0.4), &array, &free, &params).unwrap();
        let expected = kron(&identity(4), &single_qubit_rotation(1.1, 0.4));
        assert!(max_abs(&(u - expected)) < 1e-12);
    }

    #[test]
    fn realistic_approaches_ideal_at_strong_blockade() {
        let (array, _, params) = chain3();
        let graph = chain3_nn(1000.0 * params.omega);
        let p = Pulse::on("W", PI, 0.0);
        let real = realistic_propagate(&p, &array, &graph, &params).unwrap();
        let ideal = ideal_propagate(&p, &array, &graph).unwrap();
        assert!(phase_distance(&real, &ideal).unwrap() < 5e-3);
    }

    #[test]
    fn distance_decreases_with_blockade_strength() {
        let (array, _, params) = chain3();
        let pulses = [
            Pulse::on("W", PI, 0.0),
            Pulse::on("W", PI / 2.0, 0.3),
            Pulse::on("A", PI, PI / 2.0),
            Pulse::on("B", 2.0 * PI, 0.0),
        ];
        for p in &pulses {
            let mut prev = f64::INFINITY;
            for ratio in [10.0, 100.0, 1000.0] {
                let graph = chain3_nn(ratio * params.omega);
                let real = realistic_propagate(p, &array, &graph, &params).unwrap();
                let ideal = ideal_propagate(p, &array, &graph).unwrap();
                let d = phase_distance(&real, &ideal).unwrap();
                assert!(d < prev, "{p}: {d} !< {prev}");
                prev = d;
            }
        }
    }

    #[test]
    fn blockade_leakage_at_seven_microns() {
        let (array, graph, params) = chain3();
        let u = realistic_propagate(&Pulse::on("W", PI, 0.0), &array, &graph, &params).unwrap();
        let out = &u * ket(8, 0b100);
        // population that reached |1⟩_A|1⟩_W
        let leak = out[0b110].norm_sqr();
        let v = graph.strength(0, 1);
        let estimate = params.omega.powi(2) / (2.0 * v * v);
        assert!((estimate - 0.036).abs() < 0.02);
        assert!(
            leak > estimate / 2.0 && leak < estimate * 2.0,
            "leak {leak} vs {estimate}"
        );
    }

    #[test]
    fn sequence_examples() {
        let (array, graph, params) = chain3();
        let empty = sequence_propagate(
            &PulseSequence::default(),
            PropagationModel::Ideal,
            &array,
            &graph,
            &params,
        )
        .unwrap();
        assert_eq!(empty, identity(8));
        let seq = PulseSequence::new(vec![Pulse::on("A", PI, 0.0); 2]);
        let u = sequence_propagate(&seq, PropagationModel::Ideal, &array, &graph, &params).unwrap();
        for s in [0b000, 0b001, 0b100, 0b101] {
            assert!((u[(s, s)] + c64(1.0, 0.0)).norm() < 1e-15);
        }
    }

    #[test]
    fn sequence_order_is_temporal() {
        let (array, graph, params) = chain3();
        let a = Pulse::on("A", PI / 2.0, 0.0);
        let b = Pulse::on("A", PI / 2.0, PI / 2.0);
        let ua = ideal_propagate(&a, &array, &graph).unwrap();
        let ub = ideal_propagate(&b, &array, &graph).unwrap();
        let seq = PulseSequence::new(vec![a, b]);
        let u = sequence_propagate(&seq, PropagationModel::Ideal, &array, &graph, &params).unwrap();
        assert!(max_abs(&(u - ub * ua)) < 1e-15);
    }

    #[test]
    fn split_full_turns_preserves_ideal_unitary() {
        let (array, graph, params) = chain3();
        let seq = PulseSequence::new(vec![
            Pulse::on("A", PI, PI / 2.0),
            Pulse::on("W", 2.0 * PI, PI / 2.0),
        ]);
        let split = seq.split_full_turns();
        assert_eq!(split.len(), 3);
        let u1 =
            sequence_propagate(&seq, PropagationModel::Ideal, &array, &graph, &params).unwrap();
        let u2 =
            sequence_propagate(&split, PropagationModel::Ideal, &array, &graph, &params).unwrap();
        assert!(max_abs(&(u1 - u2)) < 1e-14);
        assert!((seq.total_duration(mhz(2.0)) - 0.75).abs() < 1e-12);
    }

    proptest! {
        #[test]
        fn ideal_is_unitary_and_inverse_cancels(
            theta in 0.0..(2.0 * PI),
            phi in -PI..PI,
            target in prop::sample::select(vec!["A", "W", "B"]),
        ) {
            let (array, graph, _) = chain3();
            let p = Pulse::on(target, theta, phi);
            let u = ideal_propagate(&p, &array, &graph).unwrap();
            prop_assert!(is_unitary(&u, 1e-12));
            // phase-advanced inverse undoes the pulse everywhere
            let dagger = ideal_propagate(&p.inverse(), &array, &graph).unwrap();
            prop_assert!(max_abs(&(dagger * &u - identity(8))) < 1e-12);
            // complementary area closes a full turn: −1 where the target is free, +1 where blockaded
            let rest = ideal_propagate(&Pulse::on(target, 2.0 * PI - theta, phi), &array, &graph).unwrap();
            let prod = rest * &u;
            let t = array.index_of(target).unwrap();
            let neighbors = graph.blockade_neighbors(t);
            for s in 0..8 {
                let free = neighbors.iter().all(|&j| array.bit(s, j) == 0);
                let expected = if free { -1.0 } else { 1.0 };
                prop_assert!((prod[(s, s)] - c64(expected, 0.0)).norm() < 1e-12);
            }
        }

        #[test]
        fn both_models_conserve_norm(
            theta in 0.0..(2.0 * PI),
            phi in -PI..PI,
            target in prop::sample::select(vec!["A", "W", "B"]),
            amps in prop::collection::vec(-1.0f64..1.0, 16),
        ) {
            let (array, graph, params) = chain3();
            let p = Pulse::on(target, theta, phi);
            let psi = ComplexVector::from_fn(8, |i, _| c64(amps[2 * i], amps[2 * i + 1]));
            let norm = psi.norm();
            for u in [
                ideal_propagate(&p, &array, &graph).unwrap(),
                realistic_propagate(&p, &array, &graph, &params).unwrap(),
            ] {
                prop_assert!(((&u * &psi).norm() - norm).abs() < 1e-10);
            }
        }
    }
}
