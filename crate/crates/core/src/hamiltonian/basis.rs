//! Product basis of an M-cell circuit.
//!
//! Basis state `|x_M ... x_1>` has index `sum_k c(x_k) 3^(k-1)` where cell 1 is
//! the first cell in the layout and `c(0) = 0, c(N) = 1, c(1) = 2`.

use crate::model::CellState;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct TritIndex {
    value: usize,
    cells: usize,
}

/// `3^cells`, or `None` on overflow.
pub fn basis_dimension(cells: usize) -> Option<usize> {
    3usize.checked_pow(u32::try_from(cells).ok()?)
}

impl TritIndex {
    /// Panics if `value >= 3^cells`.
    pub fn new(value: usize, cells: usize) -> Self {
        let dim = basis_dimension(cells).expect("basis dimension overflows usize");
        assert!(value < dim, "index {value} out of range for {cells} cells");
        TritIndex { value, cells }
    }

    pub fn encode(states: &[CellState]) -> Self {
        let value = states.iter().rev().fold(0, |acc, s| 3 * acc + s.code());
        TritIndex { value, cells: states.len() }
    }

    pub fn decode(&self) -> Vec<CellState> {
        let mut v = self.value;
        (0..self.cells)
            .map(|_| {
                let s = CellState::from_code(v % 3).unwrap();
                v /= 3;
                s
            })
            .collect()
    }

    /// State of the cell at position `k` (0-based).
    pub fn trit(&self, k: usize) -> CellState {
        CellState::from_code(self.value / 3usize.pow(k as u32) % 3).unwrap()
    }

    pub fn value(&self) -> usize {
        self.value
    }

    pub fn cells(&self) -> usize {
        self.cells
    }
}

/// Odometer over basis states in index order, yielding trit codes.
pub(crate) struct TritCounter {
    codes: Vec<u8>,
}

impl TritCounter {
    pub fn new(cells: usize) -> Self {
        TritCounter { codes: vec![0; cells] }
    }

    pub fn codes(&self) -> &[u8] {
        &self.codes
    }

    pub fn advance(&mut self) {
        for c in self.codes.iter_mut() {
            if *c == 2 {
                *c = 0;
            } else {
                *c += 1;
                return;
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn encoding_convention() {
        use CellState::*;
        assert_eq!(TritIndex::encode(&[Zero]).value(), 0);
        assert_eq!(TritIndex::encode(&[Null]).value(), 1);
        assert_eq!(TritIndex::encode(&[One]).value(), 2);
        // cell 1 least significant
        assert_eq!(TritIndex::encode(&[One, Null]).value(), 2 + 3);
        assert_eq!(TritIndex::new(5, 2).trit(0), One);
        assert_eq!(TritIndex::new(5, 2).trit(1), Null);
    }

    #[test]
    fn counter_matches_decode() {
        let mut c = TritCounter::new(3);
        for i in 0..27 {
            let decoded: Vec<u8> = TritIndex::new(i, 3).decode().iter().map(|s| s.code() as u8).collect();
            assert_eq!(c.codes(), decoded.as_slice());
            c.advance();
        }
    }

    #[test]
    fn dimension_overflow() {
        assert_eq!(basis_dimension(8), Some(6561));
        assert_eq!(basis_dimension(200), None);
    }

    proptest! {
        #[test]
        fn encode_decode_identity(cells in 1usize..10, seed in any::<u64>()) {
            let dim = basis_dimension(cells).unwrap();
            let idx = TritIndex::new((seed as usize) % dim, cells);
            prop_assert_eq!(TritIndex::encode(&idx.decode()), idx);
        }
    }
}
