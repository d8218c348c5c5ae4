use crate::error::ConfigError;

pub const MAX_NODE_SIZE: u32 = 4096;
pub const MAX_CHILD_OFFSETS: usize = 8;
pub const MAX_ROOTS: usize = 4;

/// The six configuration instructions software uses to describe a linked
/// data structure to the prefetcher.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum LdsCommand {
    /// Clear every table and register.
    Reset,
    /// Point root slot `slot` at the node starting at `addr`.
    SetRoot { slot: usize, addr: u64 },
    ClearRoots,
    /// Register a child-pointer offset within a node.
    AddOffset(u32),
    /// Node size in bytes.
    SetSize(u32),
    /// Optional hint that a traversal is about to start.
    NewTraversal,
}

/// Software-provided description of a node: its size, the offsets of the
/// child pointers worth following, and the learned key offset.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct NodeLayout {
    node_size: u32,
    child_offsets: Vec<u32>,
    key_offset: u32,
}

impl NodeLayout {
    pub fn node_size(&self) -> u32 {
        self.node_size
    }

    pub fn child_offsets(&self) -> &[u32] {
        &self.child_offsets
    }

    pub fn key_offset(&self) -> u32 {
        self.key_offset
    }

    pub fn is_configured(&self) -> bool {
        self.node_size > 0
    }

    pub fn set_size(&mut self, size: u32) -> Result<(), ConfigError> {
        if size == 0 || size > MAX_NODE_SIZE {
            return Err(ConfigError::Layout(format!(
                "node size {size} outside 1..={MAX_NODE_SIZE}"
            )));
        }
        if let Some(o) = self.child_offsets.iter().find(|&&o| o + 8 > size) {
            return Err(ConfigError::Layout(format!(
                "registered offset {o} does not fit a {size}-byte node"
            )));
        }
        self.node_size = size;
        if self.key_offset >= size {
            self.key_offset = 0;
        }
        Ok(())
    }

    pub fn add_offset(&mut self, offset: u32) -> Result<(), ConfigError> {
        if self.child_offsets.len() == MAX_CHILD_OFFSETS {
            return Err(ConfigError::TooManyOffsets(MAX_CHILD_OFFSETS));
        }
        if self.node_size == 0 {
            return Err(ConfigError::Layout(
                "node size must be set before adding offsets".into(),
            ));
        }
        if offset % 8 != 0 || offset + 8 > self.node_size {
            return Err(ConfigError::Layout(format!(
                "child offset {offset} is not an aligned pointer inside a {}-byte node",
                self.node_size
            )));
        }
        self.child_offsets.push(offset);
        Ok(())
    }

    pub(super) fn set_key_offset(&mut self, offset: u32) {
        debug_assert!(offset < self.node_size);
        self.key_offset = offset;
    }
}
