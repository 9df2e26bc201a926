//! Cipher Block Chaining over [`KeySchedule`].
//!
//! Blocks within one message are processed strictly in order; each
//! encryption depends on the previous ciphertext block.

use serde::{Deserialize, Serialize};

use crate::aes::{Block, CipherKey, KeySchedule, BLOCK_SIZE};
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum PaddingPolicy {
    /// Input must already be a positive multiple of the block size.
    #[default]
    NoneRequired,
    Pkcs7,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Message {
    pub octets: Vec<u8>,
    pub padding: PaddingPolicy,
}

impl Message {
    pub fn new(octets: impl Into<Vec<u8>>) -> Self {
        Self {
            octets: octets.into(),
            padding: PaddingPolicy::NoneRequired,
        }
    }

    pub fn with_padding(octets: impl Into<Vec<u8>>, padding: PaddingPolicy) -> Self {
        Self {
            octets: octets.into(),
            padding,
        }
    }

    fn padded(&self) -> Result<Vec<u8>> {
        match self.padding {
            PaddingPolicy::NoneRequired => {
                check_block_multiple("plaintext", self.octets.len())?;
                Ok(self.octets.clone())
            }
            PaddingPolicy::Pkcs7 => {
                let pad = BLOCK_SIZE - self.octets.len() % BLOCK_SIZE;
                let mut out = Vec::with_capacity(self.octets.len() + pad);
                out.extend_from_slice(&self.octets);
                out.resize(self.octets.len() + pad, pad as u8);
                Ok(out)
            }
        }
    }
}

fn check_block_multiple(what: &'static str, len: usize) -> Result<()> {
    if len == 0 || !len.is_multiple_of(BLOCK_SIZE) {
        return Err(Error::InvalidLength {
            what,
            len,
            expected: "a positive multiple of 16",
        });
    }
    Ok(())
}

/// An expanded key plus the IV, which the caller always supplies.
#[derive(Debug, Clone)]
pub struct CbcContext {
    schedule: KeySchedule,
    iv: Block,
}

impl CbcContext {
    pub fn new(schedule: KeySchedule, iv: Block) -> Self {
        Self { schedule, iv }
    }

    pub fn from_key(key: &CipherKey, iv: Block) -> Self {
        Self::new(KeySchedule::new(key), iv)
    }

    /// Builds a context from hex key and IV strings.
    pub fn from_hex(key: &str, iv: &str) -> Result<Self> {
        let key = CipherKey::from_hex(key)?;
        let iv_bytes = crate::hexfmt::decode(iv, "iv")?;
        let iv: Block = iv_bytes
            .as_slice()
            .try_into()
            .map_err(|_| Error::InvalidLength {
                what: "iv",
                len: iv_bytes.len(),
                expected: "16",
            })?;
        Ok(Self::from_key(&key, iv))
    }

    pub fn schedule(&self) -> &KeySchedule {
        &self.schedule
    }

    pub fn iv(&self) -> &Block {
        &self.iv
    }

    pub fn encrypt(&self, plaintext: &Message) -> Result<Vec<u8>> {
        let mut data = plaintext.padded()?;
        let mut chain = self.iv;
        for chunk in data.chunks_exact_mut(BLOCK_SIZE) {
            let input: Block = std::array::from_fn(|i| chunk[i] ^ chain[i]);
            chain = self.schedule.encrypt_unchecked(&input);
            chunk.copy_from_slice(&chain);
        }
        Ok(data)
    }

    pub fn decrypt(&self, ciphertext: &[u8], padding: PaddingPolicy) -> Result<Message> {
        check_block_multiple("ciphertext", ciphertext.len())?;
        let mut out = Vec::with_capacity(ciphertext.len());
        let mut chain = self.iv;
        for chunk in ciphertext.chunks_exact(BLOCK_SIZE) {
            let block: Block = chunk.try_into().expect("exact chunk");
            let plain = self.schedule.decrypt_unchecked(&block);
            out.extend(plain.iter().zip(&chain).map(|(p, c)| p ^ c));
            chain = block;
        }
        if padding == PaddingPolicy::Pkcs7 {
            strip_pkcs7(&mut out)?;
        }
        Ok(Message {
            octets: out,
            padding,
        })
    }
}

fn strip_pkcs7(data: &mut Vec<u8>) -> Result<()> {
    let pad = *data.last().ok_or(Error::BadPadding)? as usize;
    if pad == 0 || pad > BLOCK_SIZE || pad > data.len() {
        return Err(Error::BadPadding);
    }
    if data[data.len() - pad..].iter().any(|&b| b as usize != pad) {
        return Err(Error::BadPadding);
    }
    data.truncate(data.len() - pad);
    Ok(())
}

pub fn cbc_encrypt(ctx: &CbcContext, plaintext: &Message) -> Result<Vec<u8>> {
    ctx.encrypt(plaintext)
}

pub fn cbc_decrypt(ctx: &CbcContext, ciphertext: &[u8], padding: PaddingPolicy) -> Result<Message> {
    ctx.decrypt(ciphertext, padding)
}
