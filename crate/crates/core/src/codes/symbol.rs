//! Byte-string symbols and partially erased words.

use serde::{Deserialize, Serialize};

use super::CodeError;

/// A fixed-length byte string. Addition is byte-wise XOR.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Symbol(pub Vec<u8>);

impl Symbol {
    pub fn zero(len: usize) -> Self {
        Self(vec![0; len])
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn as_bytes(&self) -> &[u8] {
        &self.0
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(|&b| b == 0)
    }

    pub fn xor_assign(&mut self, other: &Symbol) {
        debug_assert_eq!(self.0.len(), other.0.len());
        for (a, b) in self.0.iter_mut().zip(&other.0) {
            *a ^= b;
        }
    }
}

impl From<Vec<u8>> for Symbol {
    fn from(v: Vec<u8>) -> Self {
        Self(v)
    }
}

/// A length-n word where each entry is either a known symbol or erased.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct LayerWord {
    symbol_len: usize,
    entries: Vec<Option<Symbol>>,
}

impl LayerWord {
    pub fn new(symbol_len: usize, entries: Vec<Option<Symbol>>) -> Result<Self, CodeError> {
        if let Some((j, s)) = entries
            .iter()
            .enumerate()
            .find_map(|(j, e)| e.as_ref().filter(|s| s.len() != symbol_len).map(|s| (j, s)))
        {
            return Err(CodeError::SymbolLength {
                position: j,
                expected: symbol_len,
                found: s.len(),
            });
        }
        Ok(Self {
            symbol_len,
            entries,
        })
    }

    /// A word with every entry known. All symbols must share one length.
    pub fn from_symbols(symbols: Vec<Symbol>) -> Result<Self, CodeError> {
        let len = symbols.first().map_or(0, Symbol::len);
        Self::new(len, symbols.into_iter().map(Some).collect())
    }

    pub fn erased(n: usize, symbol_len: usize) -> Self {
        Self {
            symbol_len,
            entries: vec![None; n],
        }
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn symbol_len(&self) -> usize {
        self.symbol_len
    }

    pub fn entries(&self) -> &[Option<Symbol>] {
        &self.entries
    }

    pub fn get(&self, j: usize) -> Option<&Symbol> {
        self.entries[j].as_ref()
    }

    pub fn is_erased(&self, j: usize) -> bool {
        self.entries[j].is_none()
    }

    pub fn erase(&mut self, j: usize) {
        self.entries[j] = None;
    }

    /// Sets position `j`. Panics if the symbol length is wrong.
    pub fn set(&mut self, j: usize, s: Symbol) {
        assert_eq!(s.len(), self.symbol_len, "symbol length mismatch");
        self.entries[j] = Some(s);
    }

    pub fn erased_positions(&self) -> Vec<usize> {
        (0..self.len()).filter(|&j| self.is_erased(j)).collect()
    }

    pub fn erasure_count(&self) -> usize {
        self.entries.iter().filter(|e| e.is_none()).count()
    }

    /// A copy with the given positions erased.
    pub fn with_erasures(&self, positions: impl IntoIterator<Item = usize>) -> Self {
        let mut w = self.clone();
        for j in positions {
            w.erase(j);
        }
        w
    }

    /// All symbols, or `None` if anything is erased.
    pub fn to_symbols(&self) -> Option<Vec<Symbol>> {
        self.entries.iter().cloned().collect()
    }
}
