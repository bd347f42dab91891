use std::fmt;

use serde::{Deserialize, Deserializer, Serialize, Serializer};
use sha2::{Digest as _, Sha256};

/// Digest size in bytes.
pub const DIGEST_BYTES: usize = 32;
/// Digest size in bits.
pub const DIGEST_BITS: usize = DIGEST_BYTES * 8;

#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Digest(pub [u8; DIGEST_BYTES]);

impl Digest {
    pub fn as_bytes(&self) -> &[u8] {
        &self.0
    }

    pub fn from_slice(b: &[u8]) -> Option<Self> {
        b.try_into().ok().map(Self)
    }

    pub fn to_hex(&self) -> String {
        hex::encode(self.0)
    }
}

impl fmt::Debug for Digest {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Digest({})", &self.to_hex()[..16])
    }
}

impl fmt::Display for Digest {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_hex())
    }
}

impl Serialize for Digest {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_hex())
    }
}

impl<'de> Deserialize<'de> for Digest {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        let bytes = hex::decode(&s).map_err(serde::de::Error::custom)?;
        Digest::from_slice(&bytes).ok_or_else(|| serde::de::Error::custom("digest must be 32 bytes"))
    }
}

/// Hash of a coded symbol at tree layer `layer` (0 = base). The layer index
/// is prepended as a domain-separation byte.
pub fn hash_symbol(layer: usize, bytes: &[u8]) -> Digest {
    let mut h = Sha256::new();
    h.update([layer as u8]);
    h.update(bytes);
    Digest(h.finalize().into())
}

/// Plain SHA-256, used by the uncoded Merkle tree.
pub fn sha256(parts: &[&[u8]]) -> Digest {
    let mut h = Sha256::new();
    for p in parts {
        h.update(p);
    }
    Digest(h.finalize().into())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn layers_are_separated() {
        assert_ne!(hash_symbol(0, b"x"), hash_symbol(1, b"x"));
        assert_eq!(hash_symbol(2, b"x"), sha256(&[&[2], b"x"]));
    }

    #[test]
    fn known_vector() {
        assert_eq!(
            sha256(&[b"abc"]).to_hex(),
            "ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad"
        );
    }

    #[test]
    fn json_is_hex() {
        let d = sha256(&[b""]);
        let j = serde_json::to_string(&d).unwrap();
        assert_eq!(serde_json::from_str::<Digest>(&j).unwrap(), d);
    }
}
