//! Square lattice of three-state agents with periodic boundaries.

use rand::Rng;

use crate::error::{Error, Result};
use crate::spin::Spin;

/// An `L x L` torus of spins stored row-major, with the spin sum cached.
///
/// Every write goes through [`SpinLattice::set`], which keeps `spin_sum`
/// equal to the sum over all cells.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SpinLattice {
    side: usize,
    cells: Vec<Spin>,
    spin_sum: i64,
}

impl SpinLattice {
    /// Lattice with every cell set to `spin`.
    pub fn filled(side: usize, spin: Spin) -> Result<Self> {
        check_side(side)?;
        let n = side * side;
        Ok(SpinLattice {
            side,
            cells: vec![spin; n],
            spin_sum: spin.value() as i64 * n as i64,
        })
    }

    pub fn from_spins(side: usize, cells: Vec<Spin>) -> Result<Self> {
        check_side(side)?;
        if cells.len() != side * side {
            return Err(Error::LatticeShape {
                side,
                expected: side * side,
                actual: cells.len(),
            });
        }
        let spin_sum = cells.iter().map(|s| s.value() as i64).sum();
        Ok(SpinLattice {
            side,
            cells,
            spin_sum,
        })
    }

    /// Each cell drawn independently and uniformly from {-1, 0, +1}.
    pub fn random<R: Rng + ?Sized>(side: usize, rng: &mut R) -> Result<Self> {
        check_side(side)?;
        let cells = (0..side * side)
            .map(|_| Spin::ALL[rng.random_range(0..3usize)])
            .collect();
        Self::from_spins(side, cells)
    }

    #[inline]
    pub fn side(&self) -> usize {
        self.side
    }

    /// Number of sites, `N = L^2`.
    #[inline]
    pub fn len(&self) -> usize {
        self.cells.len()
    }

    #[inline]
    pub fn is_empty(&self) -> bool {
        self.cells.is_empty()
    }

    #[inline]
    pub fn spins(&self) -> &[Spin] {
        &self.cells
    }

    #[inline]
    pub fn get(&self, i: usize) -> Spin {
        self.cells[i]
    }

    /// Site index of row `row`, column `col` (both wrapped).
    #[inline]
    pub fn index(&self, row: usize, col: usize) -> usize {
        (row % self.side) * self.side + col % self.side
    }

    /// Writes `spin` into site `i` and adjusts the cached sum.
    ///
    /// Panics if `i` is out of range.
    #[inline]
    pub fn set(&mut self, i: usize, spin: Spin) {
        let old = std::mem::replace(&mut self.cells[i], spin);
        self.spin_sum += (spin.value() - old.value()) as i64;
    }

    /// The four von Neumann neighbours of site `i` (up, down, left, right),
    /// wrapping on both axes.
    #[inline]
    pub fn neighbors(&self, i: usize) -> [usize; 4] {
        let l = self.side;
        let n = self.cells.len();
        assert!(i < n, "site index {i} out of range for {n} sites");
        let col = i % l;
        let up = if i < l { i + n - l } else { i - l };
        let down = if i + l >= n { i + l - n } else { i + l };
        let left = if col == 0 { i + l - 1 } else { i - 1 };
        let right = if col == l - 1 { i + 1 - l } else { i + 1 };
        [up, down, left, right]
    }

    /// Sum of the four neighbouring spins of site `i`, in `[-4, 4]`.
    #[inline]
    pub fn neighbor_sum(&self, i: usize) -> i32 {
        self.neighbors(i)
            .iter()
            .map(|&j| self.cells[j].value())
            .sum()
    }

    /// Cached `sum_i s_i`.
    #[inline]
    pub fn spin_sum(&self) -> i64 {
        self.spin_sum
    }

    /// `sum_i s_i` computed from scratch.
    pub fn recompute_sum(&self) -> i64 {
        self.cells.iter().map(|s| s.value() as i64).sum()
    }

    /// Mean spin `M = spin_sum / N`.
    #[inline]
    pub fn magnetization(&self) -> f64 {
        debug_assert_eq!(
            self.spin_sum,
            self.recompute_sum(),
            "cached spin sum diverged from the lattice"
        );
        self.spin_sum as f64 / self.cells.len() as f64
    }

    pub fn count(&self, spin: Spin) -> usize {
        self.cells.iter().filter(|&&s| s == spin).count()
    }

    /// Global spin flip.
    pub fn negated(&self) -> SpinLattice {
        SpinLattice {
            side: self.side,
            cells: self.cells.iter().map(|&s| -s).collect(),
            spin_sum: -self.spin_sum,
        }
    }
}

fn check_side(side: usize) -> Result<()> {
    if side < 2 {
        return Err(Error::InvalidParam {
            name: "lattice-size",
            value: side.to_string(),
            expected: "an integer >= 2",
        });
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn neighbors_wrap_on_both_axes() {
        let lat = SpinLattice::filled(3, Spin::Zero).unwrap();
        // (0,0): up (2,0), down (1,0), left (0,2), right (0,1)
        assert_eq!(lat.neighbors(0), [6, 3, 2, 1]);
        // (2,2)
        assert_eq!(lat.neighbors(8), [5, 2, 7, 6]);
        // centre has no wrap
        assert_eq!(lat.neighbors(4), [1, 7, 3, 5]);
    }

    #[test]
    fn neighbors_on_smallest_lattice() {
        // On a 2x2 torus up and down coincide, as do left and right.
        let lat = SpinLattice::filled(2, Spin::Zero).unwrap();
        assert_eq!(lat.neighbors(0), [2, 2, 1, 1]);
        assert_eq!(lat.neighbors(3), [1, 1, 2, 2]);
    }

    #[test]
    fn neighbor_relation_is_symmetric() {
        let lat = SpinLattice::filled(5, Spin::Zero).unwrap();
        for i in 0..lat.len() {
            for j in lat.neighbors(i) {
                assert!(lat.neighbors(j).contains(&i));
            }
        }
    }

    #[test]
    #[should_panic]
    fn neighbors_out_of_range() {
        let lat = SpinLattice::filled(3, Spin::Zero).unwrap();
        lat.neighbors(9);
    }

    #[test]
    fn set_tracks_sum() {
        let mut lat = SpinLattice::filled(4, Spin::Up).unwrap();
        assert_eq!(lat.spin_sum(), 16);
        lat.set(0, Spin::Down);
        lat.set(5, Spin::Zero);
        lat.set(5, Spin::Zero);
        assert_eq!(lat.spin_sum(), 13);
        assert_eq!(lat.recompute_sum(), 13);
    }

    #[test]
    fn magnetization_examples() {
        assert_eq!(SpinLattice::filled(8, Spin::Up).unwrap().magnetization(), 1.0);
        assert_eq!(SpinLattice::filled(8, Spin::Down).unwrap().magnetization(), -1.0);
        let cells = (0..1024)
            .map(|i| if i % 2 == 0 { Spin::Up } else { Spin::Down })
            .collect();
        let half = SpinLattice::from_spins(32, cells).unwrap();
        assert_eq!(half.magnetization(), 0.0);
    }

    #[test]
    fn rejects_bad_shapes() {
        assert!(SpinLattice::filled(1, Spin::Up).is_err());
        assert!(matches!(
            SpinLattice::from_spins(3, vec![Spin::Up; 8]),
            Err(Error::LatticeShape { .. })
        ));
    }

    #[test]
    fn random_start_uses_all_three_states() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let lat = SpinLattice::random(32, &mut rng).unwrap();
        for s in Spin::ALL {
            let c = lat.count(s);
            assert!((250..430).contains(&c), "{s}: {c}");
        }
        assert_eq!(lat.spin_sum(), lat.recompute_sum());
    }
}
