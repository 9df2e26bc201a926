//! The Rijndael block cipher with 128-bit blocks and 128/192/256-bit keys.
//!
//! This is a plain table-lookup implementation meant as a measurement
//! testbed. It makes no attempt at constant-time execution and must not be
//! used to protect real data.

pub mod gf;
mod sbox;
mod state;

pub use sbox::SBoxTables;
pub use state::{AesState, Direction};

use crate::error::{Error, Result};

pub const BLOCK_SIZE: usize = 16;

/// Block length in 32-bit words.
pub const NB: usize = 4;

pub type Block = [u8; BLOCK_SIZE];

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum KeyVariant {
    Aes128,
    Aes192,
    Aes256,
}

impl KeyVariant {
    pub fn from_len(len: usize) -> Result<Self> {
        match len {
            16 => Ok(Self::Aes128),
            24 => Ok(Self::Aes192),
            32 => Ok(Self::Aes256),
            other => Err(Error::InvalidKeyLength(other)),
        }
    }

    pub fn key_len(self) -> usize {
        self.params().nk * 4
    }

    pub fn params(self) -> AesParams {
        let nk = match self {
            Self::Aes128 => 4,
            Self::Aes192 => 6,
            Self::Aes256 => 8,
        };
        AesParams {
            nk,
            nb: NB,
            nr: nk.max(NB) + 6,
        }
    }
}

/// Key length, block length and round count, all in the cipher's own units.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct AesParams {
    /// Key length in words.
    pub nk: usize,
    /// Block length in words; always 4.
    pub nb: usize,
    /// Number of rounds.
    pub nr: usize,
}

#[derive(Clone, PartialEq, Eq)]
pub struct CipherKey {
    octets: Vec<u8>,
    variant: KeyVariant,
}

impl CipherKey {
    pub fn new(octets: &[u8]) -> Result<Self> {
        let variant = KeyVariant::from_len(octets.len())?;
        Ok(Self {
            octets: octets.to_vec(),
            variant,
        })
    }

    pub fn from_hex(text: &str) -> Result<Self> {
        Self::new(&crate::hexfmt::decode(text, "key")?)
    }

    pub fn variant(&self) -> KeyVariant {
        self.variant
    }

    pub fn as_bytes(&self) -> &[u8] {
        &self.octets
    }
}

impl std::fmt::Debug for CipherKey {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("CipherKey")
            .field("variant", &self.variant)
            .finish_non_exhaustive()
    }
}

/// Expanded round keys, `nr + 1` of them, immutable once built.
#[derive(Clone, PartialEq, Eq)]
pub struct KeySchedule {
    variant: KeyVariant,
    round_keys: Vec<Block>,
}

const RCON: [u8; 10] = [0x01, 0x02, 0x04, 0x08, 0x10, 0x20, 0x40, 0x80, 0x1b, 0x36];

fn sub_word(word: [u8; 4]) -> [u8; 4] {
    let sbox = &SBoxTables::get().forward;
    word.map(|b| sbox[b as usize])
}

fn rot_word(word: [u8; 4]) -> [u8; 4] {
    [word[1], word[2], word[3], word[0]]
}

pub fn expand_key(key: &CipherKey) -> KeySchedule {
    let AesParams { nk, nb, nr } = key.variant.params();
    let total = nb * (nr + 1);
    let mut words: Vec<[u8; 4]> = key
        .octets
        .chunks_exact(4)
        .map(|c| [c[0], c[1], c[2], c[3]])
        .collect();

    for i in nk..total {
        let mut temp = words[i - 1];
        if i % nk == 0 {
            temp = sub_word(rot_word(temp));
            temp[0] ^= RCON[i / nk - 1];
        } else if nk > 6 && i % nk == 4 {
            temp = sub_word(temp);
        }
        let prev = words[i - nk];
        words.push(std::array::from_fn(|j| prev[j] ^ temp[j]));
    }

    let round_keys = words
        .chunks_exact(nb)
        .map(|ws| {
            let mut rk = [0u8; BLOCK_SIZE];
            for (dst, w) in rk.chunks_exact_mut(4).zip(ws) {
                dst.copy_from_slice(w);
            }
            rk
        })
        .collect();

    KeySchedule {
        variant: key.variant,
        round_keys,
    }
}

impl KeySchedule {
    pub fn new(key: &CipherKey) -> Self {
        expand_key(key)
    }

    /// Rebuilds a schedule from raw round keys, checking the count against `variant`.
    pub fn from_round_keys(variant: KeyVariant, round_keys: Vec<Block>) -> Result<Self> {
        let expected = variant.params().nr + 1;
        if round_keys.len() != expected {
            return Err(Error::ScheduleMismatch {
                expected,
                actual: round_keys.len(),
            });
        }
        Ok(Self {
            variant,
            round_keys,
        })
    }

    pub fn variant(&self) -> KeyVariant {
        self.variant
    }

    pub fn rounds(&self) -> usize {
        self.variant.params().nr
    }

    pub fn round_keys(&self) -> &[Block] {
        &self.round_keys
    }

    /// Word `i` of the expanded key, as a big-endian integer.
    pub fn word(&self, i: usize) -> u32 {
        let rk = &self.round_keys[i / NB];
        let off = (i % NB) * 4;
        u32::from_be_bytes([rk[off], rk[off + 1], rk[off + 2], rk[off + 3]])
    }

    fn check(&self) -> Result<()> {
        let expected = self.rounds() + 1;
        if self.round_keys.len() != expected {
            return Err(Error::ScheduleMismatch {
                expected,
                actual: self.round_keys.len(),
            });
        }
        Ok(())
    }

    pub fn encrypt_block(&self, plaintext: &Block) -> Result<Block> {
        self.check()?;
        Ok(self.encrypt_unchecked(plaintext))
    }

    pub fn decrypt_block(&self, ciphertext: &Block) -> Result<Block> {
        self.check()?;
        Ok(self.decrypt_unchecked(ciphertext))
    }

    // Schedules can only be built with the right length, so the CBC layer
    // skips the per-block check.
    pub(crate) fn encrypt_unchecked(&self, plaintext: &Block) -> Block {
        let nr = self.rounds();
        let rk = &self.round_keys;
        let mut state = AesState::from_block(*plaintext).add_round_key(&rk[0]);
        for round_key in &rk[1..nr] {
            state = state
                .sub_bytes(Direction::Forward)
                .shift_rows(Direction::Forward)
                .mix_columns(Direction::Forward)
                .add_round_key(round_key);
        }
        state
            .sub_bytes(Direction::Forward)
            .shift_rows(Direction::Forward)
            .add_round_key(&rk[nr])
            .to_block()
    }

    pub(crate) fn decrypt_unchecked(&self, ciphertext: &Block) -> Block {
        let nr = self.rounds();
        let rk = &self.round_keys;
        let mut state = AesState::from_block(*ciphertext)
            .add_round_key(&rk[nr])
            .shift_rows(Direction::Inverse)
            .sub_bytes(Direction::Inverse);
        for round_key in rk[1..nr].iter().rev() {
            state = state
                .add_round_key(round_key)
                .mix_columns(Direction::Inverse)
                .shift_rows(Direction::Inverse)
                .sub_bytes(Direction::Inverse);
        }
        state.add_round_key(&rk[0]).to_block()
    }
}

impl std::fmt::Debug for KeySchedule {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("KeySchedule")
            .field("variant", &self.variant)
            .field("round_keys", &self.round_keys.len())
            .finish()
    }
}

pub fn encrypt_block(plaintext: &Block, schedule: &KeySchedule) -> Result<Block> {
    schedule.encrypt_block(plaintext)
}

pub fn decrypt_block(ciphertext: &Block, schedule: &KeySchedule) -> Result<Block> {
    schedule.decrypt_block(ciphertext)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn block(s: &str) -> Block {
        hex::decode(s).unwrap().try_into().unwrap()
    }

    #[test]
    fn params_per_variant() {
        assert_eq!(
            KeyVariant::Aes128.params(),
            AesParams {
                nk: 4,
                nb: 4,
                nr: 10
            }
        );
        assert_eq!(
            KeyVariant::Aes192.params(),
            AesParams {
                nk: 6,
                nb: 4,
                nr: 12
            }
        );
        assert_eq!(
            KeyVariant::Aes256.params(),
            AesParams {
                nk: 8,
                nb: 4,
                nr: 14
            }
        );
    }

    #[test]
    fn rejects_bad_key_lengths() {
        for len in [0, 1, 15, 17, 23, 25, 31, 33, 64] {
            assert!(matches!(
                CipherKey::new(&vec![0; len]),
                Err(Error::InvalidKeyLength(l)) if l == len
            ));
        }
    }

    #[test]
    fn schedule_lengths() {
        for (len, n) in [(16, 11), (24, 13), (32, 15)] {
            let ks = expand_key(&CipherKey::new(&vec![7; len]).unwrap());
            assert_eq!(ks.round_keys().len(), n);
        }
    }

    #[test]
    fn aes128_schedule_words() {
        let key = CipherKey::from_hex("000102030405060708090a0b0c0d0e0f").unwrap();
        let ks = expand_key(&key);
        assert_eq!(ks.round_keys()[0].as_slice(), key.as_bytes());
        assert_eq!(ks.word(4), 0xd6aa74fd);

        let appendix =
            expand_key(&CipherKey::from_hex("2b7e151628aed2a6abf7158809cf4f3c").unwrap());
        assert_eq!(appendix.word(4), 0xa0fafe17);
        assert_eq!(appendix.word(43), 0xb6630ca6);

        let zero = expand_key(&CipherKey::new(&[0; 16]).unwrap());
        assert_eq!(zero.word(4), 0x62636363);
    }

    #[test]
    fn aes128_known_answer() {
        let ks = expand_key(&CipherKey::from_hex("000102030405060708090a0b0c0d0e0f").unwrap());
        let ct = ks
            .encrypt_block(&block("00112233445566778899aabbccddeeff"))
            .unwrap();
        assert_eq!(ct, block("69c4e0d86a7b0430d8cdb78070b4c55a"));
        let pt = ks.decrypt_block(&ct).unwrap();
        assert_eq!(pt, block("00112233445566778899aabbccddeeff"));
    }

    #[test]
    fn zero_key_zero_block_decrypt() {
        let ks = expand_key(&CipherKey::new(&[0; 16]).unwrap());
        assert_eq!(
            ks.decrypt_block(&[0; 16]).unwrap(),
            block("140f0f1011b5223d79587717ffd9ec3a")
        );
    }

    #[test]
    fn schedule_count_mismatch_rejected() {
        let err = KeySchedule::from_round_keys(KeyVariant::Aes256, vec![[0; 16]; 11]).unwrap_err();
        assert!(matches!(
            err,
            Error::ScheduleMismatch {
                expected: 15,
                actual: 11
            }
        ));
    }
}
