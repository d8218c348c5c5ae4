//! Lowercase trie `{is_word, children[26]}`.

use super::{mix, Memory};
use crate::error::MemError;
use crate::memsys::SimHeap;

pub const NODE_SIZE: u32 = 8 + 26 * 8;

/// The eight most common English letters; only their child slots are
/// registered with the prefetcher.
pub const REGISTERED_LETTERS: [u8; 8] = *b"etaoinsr";

const IS_WORD: u64 = 0;

/// Byte offset of the child slot for `letter`.
pub fn letter_offset(letter: u8) -> u32 {
    debug_assert!(letter.is_ascii_lowercase());
    8 + 8 * u32::from(letter - b'a')
}

pub(super) fn offsets() -> Vec<u32> {
    REGISTERED_LETTERS.iter().map(|&c| letter_offset(c)).collect()
}

/// Inserts every word; returns the root and the node count.
pub fn build(heap: &mut SimHeap, words: &[String]) -> Result<(u64, usize), MemError> {
    let root = heap.alloc(NODE_SIZE)?;
    let mut count = 1;
    for w in words {
        let mut cur = root;
        for c in w.bytes() {
            let field = cur + u64::from(letter_offset(c));
            let mut next = heap.load(field)?;
            if next == 0 {
                next = heap.alloc(NODE_SIZE)?;
                count += 1;
                heap.store(field, next)?;
            }
            cur = next;
        }
        heap.store(cur + IS_WORD, 1)?;
    }
    Ok((root, count))
}

/// Looks up `words[p]` for each probe; hashes whether each was found.
pub fn probe<M: Memory>(mem: &mut M, root: u64, words: &[String], probes: &[usize]) -> Result<u64, MemError> {
    let mut h = 0;
    for &p in probes {
        let mut cur = root;
        for c in words[p].bytes() {
            cur = mem.load(cur + u64::from(letter_offset(c)))?;
            if cur == 0 {
                break;
            }
        }
        let found = if cur == 0 { 0 } else { mem.load(cur + IS_WORD)? };
        h = mix(h, found);
    }
    Ok(h)
}
