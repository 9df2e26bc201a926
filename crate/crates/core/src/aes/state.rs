use std::fmt;
use std::ops::BitXor;

use super::gf;
use super::sbox::SBoxTables;
use super::BLOCK_SIZE;

/// Which way a round transformation runs.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Direction {
    Forward,
    Inverse,
}

/// The 4x4 octet matrix the round transformations act on.
///
/// Cells are stored column-major, so block octet `i` sits at row `i % 4`,
/// column `i / 4`, and the backing array is the block itself.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Default)]
pub struct AesState {
    cells: [u8; BLOCK_SIZE],
}

impl AesState {
    pub fn from_block(block: [u8; BLOCK_SIZE]) -> Self {
        Self { cells: block }
    }

    pub fn to_block(self) -> [u8; BLOCK_SIZE] {
        self.cells
    }

    pub fn get(&self, row: usize, col: usize) -> u8 {
        self.cells[col * 4 + row]
    }

    pub fn set(&mut self, row: usize, col: usize, value: u8) {
        self.cells[col * 4 + row] = value;
    }

    pub fn row(&self, row: usize) -> [u8; 4] {
        std::array::from_fn(|col| self.get(row, col))
    }

    pub fn column(&self, col: usize) -> [u8; 4] {
        std::array::from_fn(|row| self.get(row, col))
    }

    pub fn sub_bytes(self, direction: Direction) -> Self {
        let tables = SBoxTables::get();
        let table = match direction {
            Direction::Forward => &tables.forward,
            Direction::Inverse => &tables.inverse,
        };
        Self {
            cells: self.cells.map(|b| table[b as usize]),
        }
    }

    /// Rotates row `r` left by `r` positions (right for the inverse).
    pub fn shift_rows(self, direction: Direction) -> Self {
        let src = &self.cells;
        let cells = std::array::from_fn(|i| {
            let (row, col) = (i % 4, i / 4);
            let from = match direction {
                Direction::Forward => (col + row) % 4,
                Direction::Inverse => (col + 4 - row) % 4,
            };
            src[from * 4 + row]
        });
        Self { cells }
    }

    /// Multiplies every column by the circulant matrix {02,03,01,01}
    /// (or {0e,0b,0d,09} for the inverse).
    pub fn mix_columns(self, direction: Direction) -> Self {
        let mut cells = self.cells;
        for col in cells.chunks_exact_mut(4) {
            if direction == Direction::Inverse {
                // {0e,0b,0d,09} = {02,03,01,01} x {05,00,04,00}
                let u = gf::xtime(gf::xtime(col[0] ^ col[2]));
                let v = gf::xtime(gf::xtime(col[1] ^ col[3]));
                col[0] ^= u;
                col[1] ^= v;
                col[2] ^= u;
                col[3] ^= v;
            }
            let [a0, a1, a2, a3] = [col[0], col[1], col[2], col[3]];
            let all = a0 ^ a1 ^ a2 ^ a3;
            col[0] = a0 ^ all ^ gf::xtime(a0 ^ a1);
            col[1] = a1 ^ all ^ gf::xtime(a1 ^ a2);
            col[2] = a2 ^ all ^ gf::xtime(a2 ^ a3);
            col[3] = a3 ^ all ^ gf::xtime(a3 ^ a0);
        }
        Self { cells }
    }

    pub fn add_round_key(self, round_key: &[u8; BLOCK_SIZE]) -> Self {
        Self {
            cells: std::array::from_fn(|i| self.cells[i] ^ round_key[i]),
        }
    }
}

impl From<[u8; BLOCK_SIZE]> for AesState {
    fn from(block: [u8; BLOCK_SIZE]) -> Self {
        Self::from_block(block)
    }
}

impl From<AesState> for [u8; BLOCK_SIZE] {
    fn from(state: AesState) -> Self {
        state.to_block()
    }
}

impl BitXor for AesState {
    type Output = Self;

    fn bitxor(self, rhs: Self) -> Self {
        self.add_round_key(&rhs.cells)
    }
}

impl fmt::Debug for AesState {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "AesState({})", hex::encode(self.cells))
    }
}
