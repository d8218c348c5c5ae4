//! Randomized operation sequences run against the real tables and the naive
//! model in lockstep.

use rand::seq::{index, SliceRandom};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use linkey::linkey::{LdsCommand, Linkey, LinkeyConfig};
use linkey::memsys::{BlockAddr, PrefetchMeta, SimAddress, SimHeap};

use super::shadow::Shadow;

const REGION: u64 = 0x0010_0000;
const NODES: usize = 40;
const SIZES: [u32; 10] = [8, 16, 24, 40, 64, 72, 96, 128, 216, 520];
const TABLES: [(usize, usize); 6] = [(8, 8), (8, 16), (8, 32), (16, 32), (32, 64), (64, 256)];

#[derive(Debug, Default)]
pub struct Outcome {
    pub steps: usize,
    pub requests: usize,
    /// First state or request-stream divergence.
    pub divergence: Option<String>,
    /// First integrity, root-pinning or output-buffer violation.
    pub violation: Option<String>,
}

struct World {
    rng: ChaCha8Rng,
    heap: SimHeap,
    real: Linkey,
    model: Shadow,
    size: u32,
    nodes: Vec<u64>,
    pins: [Option<u64>; 4],
    out_cap: usize,
}

fn line(a: u64) -> u64 {
    a & !63
}

impl World {
    fn new(seed: u64) -> World {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let (at, cat) = TABLES[rng.gen_range(0..TABLES.len())];
        let bfq = *[8, 8, 8, 2].choose(&mut rng).unwrap();
        let out_cap = *[8, 8, 8, 3].choose(&mut rng).unwrap();
        let mut cfg = LinkeyConfig::new(at, cat);
        cfg.bfq_entries = bfq;
        cfg.output_capacity = out_cap;
        World {
            rng,
            heap: SimHeap::new(),
            real: Linkey::new(cfg).unwrap(),
            model: Shadow::new(at, cat, bfq, out_cap),
            size: 8,
            nodes: Vec::new(),
            pins: [None; 4],
            out_cap,
        }
    }

    fn node(&mut self) -> u64 {
        self.nodes[self.rng.gen_range(0..self.nodes.len())]
    }

    fn field(&mut self) -> u64 {
        8 * self.rng.gen_range(0..u64::from(self.size / 8))
    }

    fn both(&mut self, cmd: LdsCommand) -> Result<bool, String> {
        let a = self.real.apply(cmd).is_ok();
        let b = match cmd {
            LdsCommand::Reset => {
                self.model.reset();
                Ok(())
            }
            LdsCommand::SetRoot { slot, addr } => self.model.set_root(slot, addr),
            LdsCommand::ClearRoots => {
                self.model.clear_roots();
                Ok(())
            }
            LdsCommand::AddOffset(o) => self.model.add_offset(o),
            LdsCommand::SetSize(s) => self.model.set_size(s),
            LdsCommand::NewTraversal => {
                self.model.new_traversal();
                Ok(())
            }
        }
        .is_ok();
        if a != b {
            return Err(format!("{cmd:?}: real ok={a}, model ok={b}"));
        }
        match cmd {
            LdsCommand::Reset | LdsCommand::ClearRoots => self.pins = [None; 4],
            LdsCommand::SetRoot { slot, addr } if a => self.pins[slot] = Some(addr & !7),
            _ => {}
        }
        Ok(a)
    }

    fn reconfigure(&mut self) -> Result<(), String> {
        self.size = *SIZES.choose(&mut self.rng).unwrap();
        let fields = (self.size / 8) as usize;
        let k = self.rng.gen_range(1..=fields.min(8));
        let offsets: Vec<u32> = index::sample(&mut self.rng, fields, k)
            .into_iter()
            .map(|f| 8 * f as u32)
            .collect();
        let start = REGION + 8 * self.rng.gen_range(0..8);
        self.nodes = (0..NODES as u64).map(|i| start + i * u64::from(self.size)).collect();
        self.heap = SimHeap::new();
        for n in self.nodes.clone() {
            for &o in &offsets {
                if self.rng.gen_bool(0.7) {
                    let t = self.node();
                    self.write(n + u64::from(o), t);
                }
            }
        }
        self.both(LdsCommand::Reset)?;
        self.both(LdsCommand::SetSize(self.size))?;
        for &o in &offsets {
            self.both(LdsCommand::AddOffset(o))?;
        }
        for slot in 0..self.rng.gen_range(1..=2) {
            let addr = self.node();
            self.both(LdsCommand::SetRoot { slot, addr })?;
        }
        Ok(())
    }

    fn write(&mut self, addr: u64, value: u64) {
        self.heap.write64(SimAddress::new(addr).unwrap(), value).unwrap();
    }

    fn bad_config(&mut self) -> Result<(), String> {
        let cmd = match self.rng.gen_range(0..5) {
            0 => LdsCommand::SetSize(0),
            1 => LdsCommand::SetSize(self.rng.gen_range(4097..10_000)),
            2 => LdsCommand::SetSize(8 * self.rng.gen_range(1..=self.size / 8)),
            3 => LdsCommand::AddOffset(self.rng.gen_range(0..self.size + 16)),
            _ => LdsCommand::SetRoot {
                slot: self.rng.gen_range(4..9),
                addr: REGION,
            },
        };
        self.both(cmd).map(|_| ())
    }

    fn step(&mut self, out: &mut Outcome) -> Result<(), String> {
        let r = self.rng.gen_range(0..100);
        match r {
            0..=1 => self.reconfigure()?,
            2 => self.bad_config()?,
            3..=5 => {
                let slot = self.rng.gen_range(0..4);
                let mut addr = self.node();
                if self.rng.gen_bool(0.1) {
                    addr += self.field();
                }
                self.both(LdsCommand::SetRoot { slot, addr })?;
            }
            6 => {
                self.both(LdsCommand::ClearRoots)?;
            }
            7..=8 => {
                self.both(LdsCommand::NewTraversal)?;
            }
            9..=24 => {
                let n = self.node();
                let o = match self.real.layout().child_offsets().choose(&mut self.rng) {
                    Some(&o) if self.rng.gen_bool(0.8) => u64::from(o),
                    _ => self.field(),
                };
                let v = match self.rng.gen_range(0..10) {
                    0..=6 => self.node(),
                    7..=8 => 0,
                    _ => self.node() + self.field(),
                };
                self.write(n + o, v);
            }
            25..=44 => {
                let block = if self.rng.gen_bool(0.85) {
                    let n = self.node();
                    line(n + self.field())
                } else {
                    line(REGION + self.rng.gen_range(0..NODES as u64 * u64::from(self.size)))
                };
                self.real.build_table(BlockAddr::containing(block), &self.heap);
                let heap = &self.heap;
                self.model.build(block, |a| heap.word(a));
            }
            45..=59 => {
                let n = self.node();
                let block = line(n + self.rng.gen_range(0..u64::from(self.size)));
                let off = if self.rng.gen_bool(0.9) {
                    n as i64 - block as i64
                } else {
                    8 * self.rng.gen_range(-32..32)
                };
                let meta = PrefetchMeta { object_offset: off };
                self.real.bfq_ingest(BlockAddr::containing(block), meta, &self.heap);
                let heap = &self.heap;
                self.model.ingest(block, off, |a| heap.word(a));
            }
            _ => {
                let addr = match self.rng.gen_range(0..20) {
                    0..=13 => {
                        let n = self.node();
                        n + if self.rng.gen_bool(0.9) {
                            self.field()
                        } else {
                            self.rng.gen_range(0..u64::from(self.size))
                        }
                    }
                    14..=16 => match self.pins.iter().flatten().next() {
                        Some(&p) => p + self.field(),
                        None => self.node(),
                    },
                    _ => REGION + self.rng.gen_range(0..NODES as u64 * 600),
                };
                let got = self.real.handle_core_req(addr);
                let want = self.model.core_req(addr);
                let got_pairs: Vec<(u64, i64)> = got
                    .iter()
                    .map(|r| (r.block.get(), r.meta.map_or(i64::MIN, |m| m.object_offset)))
                    .collect();
                if got_pairs != want {
                    out.divergence
                        .get_or_insert(format!("access {addr:#x}: real {got_pairs:x?}, model {want:x?}"));
                }
                out.requests += got.len();
                check_buffer(addr, &got_pairs, self.out_cap).map_err(|e| {
                    out.violation.get_or_insert(e.clone());
                    e
                })?;
            }
        }
        Ok(())
    }

    fn check_pins(&self) -> Result<(), String> {
        let roots = self.real.roots();
        for (slot, pin) in self.pins.iter().enumerate() {
            let Some(base) = pin else { continue };
            let alive = roots[slot]
                .map(|i| self.real.at_entries()[i as usize])
                .is_some_and(|e| e.valid && e.base == *base);
            if !alive {
                return Err(format!("root slot {slot} ({base:#x}) lost its entry"));
            }
        }
        Ok(())
    }
}

fn check_buffer(addr: u64, reqs: &[(u64, i64)], cap: usize) -> Result<(), String> {
    if reqs.len() > cap.min(8) {
        return Err(format!("{} requests for {addr:#x}", reqs.len()));
    }
    for (i, r) in reqs.iter().enumerate() {
        if r.0 == line(addr) {
            return Err(format!("core block requested for {addr:#x}"));
        }
        if reqs[..i].iter().any(|q| q.0 == r.0) {
            return Err(format!("block {:#x} requested twice", r.0));
        }
    }
    Ok(())
}

/// Compares every observable piece of state.
pub fn diff(real: &Linkey, model: &Shadow) -> Result<(), String> {
    for (i, (a, b)) in real.at_entries().iter().zip(&model.at).enumerate() {
        let kids: Vec<Option<usize>> = a
            .children
            .iter()
            .map(|s| s.valid.then_some(s.cat_index as usize))
            .collect();
        if a.valid != b.valid
            || (a.valid
                && (a.base != b.base
                    || a.used_lru != b.used
                    || a.just_built != b.just_built
                    || kids != b.kids))
        {
            return Err(format!("AT {i}: real {a:?}, model {b:?}"));
        }
    }
    for (i, (a, b)) in real.cat_entries().iter().zip(&model.cat).enumerate() {
        if a.valid != b.valid
            || (a.valid
                && (a.used_lru != b.used
                    || a.just_built != b.just_built
                    || a.parent as usize != b.parent
                    || a.child as usize != b.child
                    || a.offset_index as usize != b.oi))
        {
            return Err(format!("CAT {i}: real {a:?}, model {b:?}"));
        }
    }
    let roots = real.roots().map(|r| r.map(|i| i as usize));
    if roots != model.roots {
        return Err(format!("roots: real {roots:?}, model {:?}", model.roots));
    }
    if real.key_offset() != model.key {
        return Err(format!("key offset: real {}, model {}", real.key_offset(), model.key));
    }
    let bfq: Vec<u64> = real.bfq().iter().collect();
    if bfq.iter().ne(model.bfq.iter()) {
        return Err(format!("bfq: real {bfq:x?}, model {:x?}", model.bfq));
    }
    let t = real.traversal();
    if t.last_root.map(|i| i as usize) != model.last_root || t.armed != model.armed {
        return Err(format!("traversal: real {t:?}, model {:?}/{}", model.last_root, model.armed));
    }
    if real.stats() != model.stats {
        return Err(format!("stats: real {:?}, model {:?}", real.stats(), model.stats));
    }
    Ok(())
}

/// Runs one seeded sequence, stopping at the first divergence or violation.
pub fn run(seed: u64, steps: usize) -> Outcome {
    let mut out = Outcome::default();
    let mut w = World::new(seed);
    if let Err(e) = w.reconfigure() {
        out.divergence = Some(e);
        return out;
    }
    for n in 0..steps {
        out.steps = n + 1;
        if let Err(e) = w.step(&mut out) {
            if out.violation.is_none() {
                out.divergence.get_or_insert(e);
            }
            break;
        }
        if out.divergence.is_some() {
            break;
        }
        if let Err(e) = diff(&w.real, &w.model) {
            out.divergence = Some(format!("step {n}: {e}"));
            break;
        }
        if let Err(e) = w.real.check_integrity().and_then(|_| w.check_pins()) {
            out.violation = Some(format!("step {n}: {e}"));
            break;
        }
    }
    out
}
