use crate::error::ConfigError;

use super::layout::{MAX_CHILD_OFFSETS, MAX_ROOTS};

/// Stored address width: 48-bit virtual addresses with the low three bits
/// dropped because nodes are pointer aligned.
pub const STORED_ADDRESS_BITS: u64 = 45;
/// Width of the `NodeSize`, `KeyO` and each `ChildOs` register.
pub const REGISTER_BITS: u64 = 12;
pub const BFQ_ENTRIES: u64 = 8;

fn log2_exact(value: usize, what: &'static str) -> Result<u64, ConfigError> {
    if value == 0 || !value.is_power_of_two() {
        return Err(ConfigError::NotPowerOfTwo { what, value });
    }
    Ok(u64::from(value.trailing_zeros()))
}

/// Total storage of the prefetcher in bits: AT, CAT, BFQ and every register.
///
/// * AT entry: valid + two LRU bits, stored address, and per child slot a CAT
///   index plus its valid bit.
/// * CAT entry: valid + two LRU bits, parent and child AT indexes and a 3-bit
///   offset index.
/// * Registers: `NodeSize`, `KeyO`, eight `ChildOs`, and four roots each
///   holding an AT index and a valid bit.
pub fn hardware_size_bits(at_entries: usize, cat_entries: usize) -> Result<u64, ConfigError> {
    let at_idx = log2_exact(at_entries, "AT entries")?;
    let cat_idx = log2_exact(cat_entries, "CAT entries")?;
    let slots = MAX_CHILD_OFFSETS as u64;
    let offset_idx = u64::from((MAX_CHILD_OFFSETS as u32).trailing_zeros());

    let at = at_entries as u64 * (3 + STORED_ADDRESS_BITS + slots * (cat_idx + 1));
    let cat = cat_entries as u64 * (3 + 2 * at_idx + offset_idx);
    let bfq = BFQ_ENTRIES * STORED_ADDRESS_BITS;
    let registers = REGISTER_BITS + REGISTER_BITS + slots * REGISTER_BITS;
    let roots = MAX_ROOTS as u64 * (at_idx + 1);
    Ok(at + cat + bfq + registers + roots)
}

/// [`hardware_size_bits`] in bytes. Exact: the bit total is an integer and
/// dividing by eight is exact in binary floating point.
pub fn hardware_size_bytes(at_entries: usize, cat_entries: usize) -> Result<f64, ConfigError> {
    Ok(hardware_size_bits(at_entries, cat_entries)? as f64 / 8.0)
}
