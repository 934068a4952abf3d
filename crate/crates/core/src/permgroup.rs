//! Permutations of `{0, .., n-1}` and permutation groups held as a base and
//! strong generating set.
//!
//! Composition follows function composition: `a.compose(&b)` maps `i` to
//! `a(b(i))`. Strings are acted on by `σ(s)_i = s_{σ(i)}`, which makes the string
//! action a right action: `σ(τ(s)) = (τ∘σ)(s)`.

use std::fmt;

use num_bigint::BigUint;
use num_traits::{One, ToPrimitive};
use rand::Rng;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};

/// A bijection on `{0, .., n-1}` stored as its image array.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Permutation {
    images: Vec<usize>,
}

impl Permutation {
    pub fn identity(degree: usize) -> Self {
        Self { images: (0..degree).collect() }
    }

    /// Builds a permutation from 0-based images, checking bijectivity.
    pub fn from_images(images: Vec<usize>) -> Result<Self> {
        let n = images.len();
        if n == 0 {
            return Err(Error::InvalidPermutation("degree must be at least 1".into()));
        }
        let mut seen = vec![false; n];
        for &x in &images {
            if x >= n || seen[x] {
                return Err(Error::InvalidPermutation(format!("{images:?} is not a bijection")));
            }
            seen[x] = true;
        }
        Ok(Self { images })
    }

    /// Builds a permutation from 1-based images, the external convention.
    pub fn from_one_based(images: &[usize]) -> Result<Self> {
        if images.contains(&0) {
            return Err(Error::InvalidPermutation("1-based images cannot contain 0".into()));
        }
        Self::from_images(images.iter().map(|&x| x - 1).collect())
    }

    /// Builds a permutation of the given degree from 1-based cycles, so that
    /// `from_cycles(3, &[&[1, 2, 3]])` is the cycle `(1 2 3)`.
    pub fn from_cycles(degree: usize, cycles: &[&[usize]]) -> Result<Self> {
        let mut images: Vec<usize> = (0..degree).collect();
        let mut touched = vec![false; degree];
        for cycle in cycles {
            for (pos, &point) in cycle.iter().enumerate() {
                if point == 0 || point > degree {
                    return Err(Error::BadIndex { index: point, len: degree });
                }
                if touched[point - 1] {
                    return Err(Error::InvalidPermutation(format!(
                        "point {point} appears in more than one cycle"
                    )));
                }
                touched[point - 1] = true;
                let next = cycle[(pos + 1) % cycle.len()];
                if next == 0 || next > degree {
                    return Err(Error::BadIndex { index: next, len: degree });
                }
                images[point - 1] = next - 1;
            }
        }
        Self::from_images(images)
    }

    /// The transposition exchanging 0-based points `a` and `b`.
    pub fn transposition(degree: usize, a: usize, b: usize) -> Self {
        let mut images: Vec<usize> = (0..degree).collect();
        images.swap(a, b);
        Self { images }
    }

    /// The cycle `0 -> 1 -> .. -> n-1 -> 0`.
    pub fn long_cycle(degree: usize) -> Self {
        Self { images: (0..degree).map(|i| (i + 1) % degree).collect() }
    }

    pub fn degree(&self) -> usize {
        self.images.len()
    }

    pub fn images(&self) -> &[usize] {
        &self.images
    }

    pub fn one_based(&self) -> Vec<usize> {
        self.images.iter().map(|&x| x + 1).collect()
    }

    #[inline]
    pub fn apply(&self, point: usize) -> usize {
        self.images[point]
    }

    pub fn is_identity(&self) -> bool {
        self.images.iter().enumerate().all(|(i, &x)| i == x)
    }

    /// `self ∘ other`, i.e. `i ↦ self(other(i))`.
    pub fn compose(&self, other: &Permutation) -> Result<Permutation> {
        if self.degree() != other.degree() {
            return Err(Error::DegreeMismatch { expected: self.degree(), found: other.degree() });
        }
        Ok(self.compose_unchecked(other))
    }

    pub(crate) fn compose_unchecked(&self, other: &Permutation) -> Permutation {
        Permutation { images: other.images.iter().map(|&x| self.images[x]).collect() }
    }

    pub fn inverse(&self) -> Permutation {
        let mut images = vec![0; self.degree()];
        for (i, &x) in self.images.iter().enumerate() {
            images[x] = i;
        }
        Permutation { images }
    }

    /// Acts as `self` on the first `self.degree()` points and as `other`,
    /// shifted, on the remaining ones.
    pub fn direct_sum(&self, other: &Permutation) -> Permutation {
        let shift = self.degree();
        let images =
            self.images.iter().copied().chain(other.images.iter().map(|&x| x + shift)).collect();
        Permutation { images }
    }

    /// Smallest point moved by the permutation.
    pub fn first_moved_point(&self) -> Option<usize> {
        self.images.iter().enumerate().find(|(i, &x)| *i != x).map(|(i, _)| i)
    }

    /// Disjoint cycles (0-based), omitting fixed points.
    pub fn cycles(&self) -> Vec<Vec<usize>> {
        let mut seen = vec![false; self.degree()];
        let mut out = Vec::new();
        for start in 0..self.degree() {
            if seen[start] || self.images[start] == start {
                continue;
            }
            let mut cycle = vec![start];
            seen[start] = true;
            let mut cur = self.images[start];
            while cur != start {
                seen[cur] = true;
                cycle.push(cur);
                cur = self.images[cur];
            }
            out.push(cycle);
        }
        out
    }
}

impl fmt::Display for Permutation {
    /// Cycle notation with 1-based points; the identity prints as `()`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let cycles = self.cycles();
        if cycles.is_empty() {
            return write!(f, "()");
        }
        for cycle in cycles {
            write!(f, "(")?;
            for (k, p) in cycle.iter().enumerate() {
                if k > 0 {
                    write!(f, " ")?;
                }
                write!(f, "{}", p + 1)?;
            }
            write!(f, ")")?;
        }
        Ok(())
    }
}

impl fmt::Debug for Permutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl Serialize for Permutation {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        self.one_based().serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for Permutation {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let images = Vec::<usize>::deserialize(deserializer)?;
        Permutation::from_one_based(&images).map_err(serde::de::Error::custom)
    }
}

#[derive(Clone, Debug)]
struct Level {
    base_point: usize,
    orbit: Vec<usize>,
    // transversal[β] maps the base point to β.
    transversal: Vec<Option<Permutation>>,
}

/// A permutation group given by generators, with a base and strong generating
/// set computed by deterministic Schreier–Sims.
#[derive(Clone, Debug)]
pub struct PermGroup {
    degree: usize,
    generators: Vec<Permutation>,
    base: Vec<usize>,
    strong_generators: Vec<Permutation>,
    levels: Vec<Level>,
    order: BigUint,
}

impl PermGroup {
    /// Runs Schreier–Sims on the generators. An empty generator list yields the
    /// trivial group of the given degree.
    pub fn new(degree: usize, generators: Vec<Permutation>) -> Result<Self> {
        if degree == 0 {
            return Err(Error::InvalidPermutation("degree must be at least 1".into()));
        }
        for g in &generators {
            if g.degree() != degree {
                return Err(Error::DegreeMismatch { expected: degree, found: g.degree() });
            }
        }
        let mut group = PermGroup {
            degree,
            generators,
            base: Vec::new(),
            strong_generators: Vec::new(),
            levels: Vec::new(),
            order: BigUint::one(),
        };
        group.schreier_sims();
        Ok(group)
    }

    /// Schreier–Sims on a nonempty generator list, inferring the degree.
    pub fn from_generators(generators: Vec<Permutation>) -> Result<Self> {
        let degree = generators
            .first()
            .map(Permutation::degree)
            .ok_or_else(|| Error::InvalidPermutation("empty generator list".into()))?;
        Self::new(degree, generators)
    }

    pub fn trivial(degree: usize) -> Result<Self> {
        Self::new(degree, Vec::new())
    }

    /// The full symmetric group, generated by `(1 2)` and `(1 2 .. n)`.
    pub fn symmetric(degree: usize) -> Result<Self> {
        let gens = if degree < 2 {
            Vec::new()
        } else {
            vec![Permutation::transposition(degree, 0, 1), Permutation::long_cycle(degree)]
        };
        Self::new(degree, gens)
    }

    pub fn cyclic(degree: usize) -> Result<Self> {
        let gens = if degree < 2 { Vec::new() } else { vec![Permutation::long_cycle(degree)] };
        Self::new(degree, gens)
    }

    fn schreier_sims(&mut self) {
        let n = self.degree;
        self.strong_generators =
            self.generators.iter().filter(|g| !g.is_identity()).cloned().collect();
        self.base.clear();
        for s in &self.strong_generators {
            if self.base.iter().all(|&b| s.apply(b) == b) {
                // A non-identity generator fixing the current base moves some point.
                self.base.push(s.first_moved_point().expect("non-identity"));
            }
        }
        self.levels = (0..self.base.len()).map(|l| self.build_level(l)).collect();

        let mut i = self.base.len();
        while i >= 1 {
            let level = i - 1;
            let mut restarted = false;
            'search: for bi in 0..self.levels[level].orbit.len() {
                let beta = self.levels[level].orbit[bi];
                let gens = self.level_generators(level);
                for x in gens {
                    let u_beta = self.levels[level].transversal[beta].clone().expect("orbit");
                    let x_beta = x.apply(beta);
                    let u_xbeta = self.levels[level].transversal[x_beta].as_ref().expect("orbit");
                    let xu = x.compose_unchecked(&u_beta);
                    if &xu == u_xbeta {
                        continue;
                    }
                    let schreier = u_xbeta.inverse().compose_unchecked(&xu);
                    let (residue, stop) = self.strip(schreier, level + 1);
                    let mut needs_update = stop < self.base.len();
                    if !needs_update && !residue.is_identity() {
                        needs_update = true;
                        let point = residue.first_moved_point().expect("non-identity");
                        self.base.push(point);
                        self.levels.push(Level {
                            base_point: point,
                            orbit: Vec::new(),
                            transversal: vec![None; n],
                        });
                    }
                    if needs_update {
                        self.strong_generators.push(residue);
                        let top = stop.min(self.base.len() - 1);
                        for l in level + 1..=top {
                            self.levels[l] = self.build_level(l);
                        }
                        i = top + 1;
                        restarted = true;
                        break 'search;
                    }
                }
            }
            if !restarted {
                i -= 1;
            }
        }

        self.order = self
            .levels
            .iter()
            .fold(BigUint::one(), |acc, level| acc * BigUint::from(level.orbit.len()));
    }

    fn level_generators(&self, level: usize) -> Vec<Permutation> {
        let prefix = &self.base[..level];
        self.strong_generators
            .iter()
            .filter(|g| prefix.iter().all(|&b| g.apply(b) == b))
            .cloned()
            .collect()
    }

    fn build_level(&self, level: usize) -> Level {
        let base_point = self.base[level];
        let gens = self.level_generators(level);
        let mut transversal: Vec<Option<Permutation>> = vec![None; self.degree];
        transversal[base_point] = Some(Permutation::identity(self.degree));
        let mut orbit = vec![base_point];
        let mut head = 0;
        while head < orbit.len() {
            let gamma = orbit[head];
            head += 1;
            let u_gamma = transversal[gamma].clone().expect("orbit point");
            for s in &gens {
                let delta = s.apply(gamma);
                if transversal[delta].is_none() {
                    transversal[delta] = Some(s.compose_unchecked(&u_gamma));
                    orbit.push(delta);
                }
            }
        }
        Level { base_point, orbit, transversal }
    }

    /// Sifts `g` through levels `start..`, returning the residue and the level at
    /// which sifting stopped (`base.len()` when every level succeeded).
    fn strip(&self, mut g: Permutation, start: usize) -> (Permutation, usize) {
        for (l, level) in self.levels.iter().enumerate().skip(start) {
            let beta = g.apply(level.base_point);
            match &level.transversal[beta] {
                None => return (g, l),
                Some(u) => g = u.inverse().compose_unchecked(&g),
            }
        }
        (g, self.levels.len())
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn generators(&self) -> &[Permutation] {
        &self.generators
    }

    pub fn base(&self) -> &[usize] {
        &self.base
    }

    pub fn strong_generators(&self) -> &[Permutation] {
        &self.strong_generators
    }

    /// Lengths of the fundamental orbits along the base.
    pub fn orbit_lengths(&self) -> Vec<usize> {
        self.levels.iter().map(|l| l.orbit.len()).collect()
    }

    pub fn order(&self) -> &BigUint {
        &self.order
    }

    pub fn order_u64(&self) -> Option<u64> {
        self.order.to_u64()
    }

    /// Membership by sifting through the stabilizer chain.
    pub fn contains(&self, p: &Permutation) -> Result<bool> {
        if p.degree() != self.degree {
            return Err(Error::DegreeMismatch { expected: self.degree, found: p.degree() });
        }
        let (residue, stop) = self.strip(p.clone(), 0);
        Ok(stop == self.levels.len() && residue.is_identity())
    }

    /// Exactly uniform element: one uniformly chosen coset representative per
    /// level, multiplied together.
    pub fn sample_uniform<R: Rng + ?Sized>(&self, rng: &mut R) -> Permutation {
        let mut g = Permutation::identity(self.degree);
        for level in &self.levels {
            let beta = level.orbit[rng.gen_range(0..level.orbit.len())];
            let u = level.transversal[beta].as_ref().expect("orbit point");
            g = g.compose_unchecked(u);
        }
        g
    }

    /// Checks that the group order does not exceed `cap`.
    pub fn check_cap(&self, cap: u64) -> Result<u64> {
        match self.order_u64() {
            Some(order) if order <= cap => Ok(order),
            _ => Err(Error::CapExceeded { order: self.order.to_string(), cap }),
        }
    }

    /// Every element exactly once, sorted lexicographically by image array (so
    /// the identity comes first).
    pub fn enumerate(&self, cap: u64) -> Result<Vec<Permutation>> {
        let order = self.check_cap(cap)?;
        let mut elements = Vec::with_capacity(order as usize);
        self.enumerate_from(0, Permutation::identity(self.degree), &mut elements);
        elements.sort_unstable();
        Ok(elements)
    }

    fn enumerate_from(&self, level: usize, prefix: Permutation, out: &mut Vec<Permutation>) {
        if level == self.levels.len() {
            out.push(prefix);
            return;
        }
        let lv = &self.levels[level];
        for &beta in &lv.orbit {
            let u = lv.transversal[beta].as_ref().expect("orbit point");
            self.enumerate_from(level + 1, prefix.compose_unchecked(u), out);
        }
    }
}

#[derive(Serialize, Deserialize)]
struct GroupSpec {
    degree: usize,
    generators: Vec<Permutation>,
}

impl Serialize for PermGroup {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        GroupSpec { degree: self.degree, generators: self.generators.clone() }.serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for PermGroup {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let spec = GroupSpec::deserialize(deserializer)?;
        PermGroup::new(spec.degree, spec.generators).map_err(serde::de::Error::custom)
    }
}

/// A string indexed by `{0, .., n-1}` over an arbitrary alphabet.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct IndexedString<T> {
    letters: Vec<T>,
}

impl<T: Clone> IndexedString<T> {
    pub fn new(letters: Vec<T>) -> Self {
        Self { letters }
    }

    pub fn len(&self) -> usize {
        self.letters.len()
    }

    pub fn is_empty(&self) -> bool {
        self.letters.is_empty()
    }

    pub fn letters(&self) -> &[T] {
        &self.letters
    }
}

impl From<&str> for IndexedString<char> {
    fn from(s: &str) -> Self {
        Self { letters: s.chars().collect() }
    }
}

impl fmt::Display for IndexedString<char> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.letters.iter().try_for_each(|c| write!(f, "{c}"))
    }
}

/// `σ(s)_i = s_{σ(i)}`.
pub fn string_action<T: Clone>(p: &Permutation, s: &IndexedString<T>) -> Result<IndexedString<T>> {
    if p.degree() != s.len() {
        return Err(Error::LengthMismatch { expected: p.degree(), found: s.len() });
    }
    Ok(IndexedString { letters: p.images.iter().map(|&x| s.letters[x].clone()).collect() })
}

/// Brute force over the group: the lexicographically smallest `σ ∈ G` with
/// `σ(s) = t`, if any.
pub fn string_isomorphism<T: Clone + Eq>(
    s: &IndexedString<T>,
    t: &IndexedString<T>,
    group: &PermGroup,
    cap: u64,
) -> Result<Option<Permutation>> {
    if s.len() != t.len() {
        return Err(Error::LengthMismatch { expected: s.len(), found: t.len() });
    }
    if group.degree() != s.len() {
        return Err(Error::LengthMismatch { expected: group.degree(), found: s.len() });
    }
    for sigma in group.enumerate(cap)? {
        if string_action(&sigma, s)? == *t {
            return Ok(Some(sigma));
        }
    }
    Ok(None)
}
