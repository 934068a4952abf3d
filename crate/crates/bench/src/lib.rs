//! Fixtures shared by the criterion benches.

use qiso::problems::{SIInstance, SSIInstance};
use qiso::rng::seeded;
use qiso::{Circuit, Gate, PermGroup};

/// `|0^n⟩` against `|+^n⟩` under `𝔖_n`.
pub fn zero_vs_plus(n: usize) -> SSIInstance {
    let plus = Circuit::pure(n, (0..n).map(Gate::H).collect()).unwrap();
    SSIInstance::new(Circuit::empty(n).unwrap(), plus, PermGroup::symmetric(n).unwrap(), Some(0.5)).unwrap()
}

/// Two random non-Clifford states under `𝔖_n`.
pub fn random_si(n: usize, seed: u64) -> SIInstance {
    let mut rng = seeded(seed);
    let c0 = Circuit::random(n, 6 * n, false, &mut rng);
    let c1 = Circuit::random(n, 6 * n, false, &mut rng);
    SIInstance::new(c0, c1, PermGroup::symmetric(n).unwrap(), Some(1.0)).unwrap()
}
