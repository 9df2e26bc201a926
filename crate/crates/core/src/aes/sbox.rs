use std::sync::OnceLock;

use super::gf;

/// Forward and inverse byte-substitution tables.
///
/// Built once from the field inverse followed by the affine map
/// `b ^ rotl(b,1) ^ rotl(b,2) ^ rotl(b,3) ^ rotl(b,4) ^ 0x63`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SBoxTables {
    pub forward: [u8; 256],
    pub inverse: [u8; 256],
}

impl SBoxTables {
    pub fn generate() -> Self {
        let mut forward = [0u8; 256];
        let mut inverse = [0u8; 256];
        for x in 0..=255u8 {
            let s = affine(gf::inv(x));
            forward[x as usize] = s;
            inverse[s as usize] = x;
        }
        Self { forward, inverse }
    }

    /// Process-wide tables, generated on first use.
    pub fn get() -> &'static SBoxTables {
        static TABLES: OnceLock<SBoxTables> = OnceLock::new();
        TABLES.get_or_init(SBoxTables::generate)
    }
}

fn affine(b: u8) -> u8 {
    b ^ b.rotate_left(1) ^ b.rotate_left(2) ^ b.rotate_left(3) ^ b.rotate_left(4) ^ 0x63
}
