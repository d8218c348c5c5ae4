use std::collections::VecDeque;

/// Backup Fetch Queue: a small FIFO of node addresses harvested from prefetch
/// responses. Pushing onto a full queue discards the oldest entry; addresses
/// already queued are not pushed twice.
#[derive(Debug, Clone)]
pub struct BackupFetchQueue {
    entries: VecDeque<u64>,
    capacity: usize,
}

/// Result of a push.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BfqPush {
    Pushed,
    Duplicate,
    /// Pushed after discarding the oldest entry.
    Displaced(u64),
}

impl BackupFetchQueue {
    pub fn new(capacity: usize) -> Self {
        BackupFetchQueue {
            entries: VecDeque::with_capacity(capacity),
            capacity,
        }
    }

    pub fn push(&mut self, addr: u64) -> BfqPush {
        if self.capacity == 0 || self.entries.contains(&addr) {
            return BfqPush::Duplicate;
        }
        let displaced = if self.entries.len() == self.capacity {
            self.entries.pop_front()
        } else {
            None
        };
        self.entries.push_back(addr);
        displaced.map_or(BfqPush::Pushed, BfqPush::Displaced)
    }

    pub fn pop(&mut self) -> Option<u64> {
        self.entries.pop_front()
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn capacity(&self) -> usize {
        self.capacity
    }

    pub fn iter(&self) -> impl Iterator<Item = u64> + '_ {
        self.entries.iter().copied()
    }

    pub fn clear(&mut self) {
        self.entries.clear();
    }
}
