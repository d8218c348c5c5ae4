use super::layout::MAX_CHILD_OFFSETS;

/// One child pointer slot of an AT entry.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Hash)]
pub struct ChildSlot {
    pub valid: bool,
    pub cat_index: u32,
}

/// Address Table entry: a known node base and links to its children's CAT
/// entries, one slot per registered child offset.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Hash)]
pub struct AtEntry {
    pub valid: bool,
    pub used_lru: bool,
    pub just_built: bool,
    /// Node base address. Always pointer aligned, so hardware stores it
    /// without the low three bits.
    pub base: u64,
    pub children: [ChildSlot; MAX_CHILD_OFFSETS],
}

/// Child Association Table entry: a parent -> child edge tagged with the index
/// of the child offset it was found at.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Hash)]
pub struct CatEntry {
    pub valid: bool,
    pub used_lru: bool,
    pub just_built: bool,
    pub parent: u32,
    pub child: u32,
    pub offset_index: u8,
}

/// Which table an operation refers to.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Table {
    Address,
    ChildAssociation,
}

/// Hardware address normalization: 48-bit space, low three bits elided.
pub(crate) fn stored_address(addr: u64) -> u64 {
    addr & ((1 << 48) - 1) & !7
}

pub(crate) fn cache_line(addr: u64) -> u64 {
    addr & !63
}
