use std::collections::BTreeMap;

use super::ConstructionError;

/// Outcome of running a computation for a bounded number of steps.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Halt {
    Halted(u64),
    Running,
}

/// Stage-wise facts about computations that drive the constructions.
///
/// `halts(e, s)` reports whether program `e` has halted on its designated
/// input within `s` steps, and `we_size(n, m)` counts the elements the `n`-th
/// enumeration has produced by stage `m`. Once halted, a program stays halted
/// with the same value; `we_size` never decreases in `m`.
pub trait StepOracle: Send + Sync {
    fn halts(&self, e: usize, s: usize) -> Halt;
    fn we_size(&self, n: usize, m: usize) -> usize;
}

/// Explicit finite table of halting stages and enumeration growth.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct MockTable {
    /// program → (halting stage, value)
    halts: BTreeMap<usize, (usize, u64)>,
    /// enumeration → stage → size from that stage on
    sizes: BTreeMap<usize, BTreeMap<usize, usize>>,
}

impl MockTable {
    pub fn new() -> Self {
        MockTable::default()
    }

    /// Program `e` halts with `value` from stage `stage` on.
    pub fn halt(mut self, e: usize, stage: usize, value: u64) -> Self {
        self.halts.insert(e, (stage, value));
        self
    }

    /// Enumeration `n` has `size` elements from stage `m` on.
    pub fn wsize(mut self, n: usize, m: usize, size: usize) -> Self {
        self.sizes.entry(n).or_default().insert(m, size);
        self
    }

    pub fn halting_entries(&self) -> impl Iterator<Item = (usize, usize, u64)> + '_ {
        self.halts.iter().map(|(&e, &(s, v))| (e, s, v))
    }

    /// Parses lines `halt <e> <s> <v>` and `wsize <n> <m> <size>`; `#` starts
    /// a comment.
    pub fn parse(text: &str) -> Result<Self, ConstructionError> {
        let mut table = MockTable::new();
        for (i, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let err = |msg: String| ConstructionError::Oracle {
                line: i + 1,
                message: msg,
            };
            let fields: Vec<&str> = line.split_whitespace().collect();
            let nums = fields[1..]
                .iter()
                .map(|f| {
                    f.parse::<u64>()
                        .map_err(|_| err(format!("expected a natural number, found {f:?}")))
                })
                .collect::<Result<Vec<_>, _>>()?;
            if nums.len() != 3 {
                return Err(err(format!("{} takes three numbers", fields[0])));
            }
            let (a, b, c) = (nums[0] as usize, nums[1] as usize, nums[2]);
            match fields[0] {
                "halt" => {
                    if table.halts.contains_key(&a) {
                        return Err(err(format!("program {a} already has a halting entry")));
                    }
                    table = table.halt(a, b, c);
                }
                "wsize" => {
                    if table.sizes.get(&a).is_some_and(|m| m.contains_key(&b)) {
                        return Err(err(format!("enumeration {a} already has a size at stage {b}")));
                    }
                    table = table.wsize(a, b, c as usize);
                }
                other => return Err(err(format!("unknown record {other:?}"))),
            }
        }
        for (n, steps) in &table.sizes {
            let sizes: Vec<usize> = steps.values().copied().collect();
            if sizes.windows(2).any(|w| w[1] < w[0]) {
                return Err(ConstructionError::Oracle {
                    line: 0,
                    message: format!("sizes of enumeration {n} decrease"),
                });
            }
        }
        Ok(table)
    }

    /// The table in the format read by [`MockTable::parse`].
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        for (e, s, v) in self.halting_entries() {
            out.push_str(&format!("halt {e} {s} {v}\n"));
        }
        for (n, steps) in &self.sizes {
            for (m, size) in steps {
                out.push_str(&format!("wsize {n} {m} {size}\n"));
            }
        }
        out
    }
}

impl StepOracle for MockTable {
    fn halts(&self, e: usize, s: usize) -> Halt {
        match self.halts.get(&e) {
            Some(&(stage, value)) if s >= stage => Halt::Halted(value),
            _ => Halt::Running,
        }
    }

    fn we_size(&self, n: usize, m: usize) -> usize {
        self.sizes
            .get(&n)
            .and_then(|steps| steps.range(..=m).next_back())
            .map_or(0, |(_, &size)| size)
    }
}

/// Instruction of a register machine.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Instr {
    Inc(usize),
    /// Decrement the register, or jump to the target if it is already zero.
    DecJz(usize, usize),
    Jump(usize),
    Stop,
}

/// Small register machines, numbered by position. Program `e` runs with
/// its own index in register 0 and outputs register 0 on halting;
/// enumeration `n` lists the inputs below `m` on which program `n` halts
/// within `m` steps. Meant for demonstrations.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct RegisterMachines {
    pub programs: Vec<Vec<Instr>>,
}

impl RegisterMachines {
    fn run(&self, program: usize, input: u64, steps: usize) -> Halt {
        let Some(code) = self.programs.get(program) else {
            return Halt::Running;
        };
        let mut regs = vec![0u64; 4];
        regs[0] = input;
        let mut pc = 0;
        for _ in 0..=steps {
            match code.get(pc) {
                None | Some(Instr::Stop) => return Halt::Halted(regs[0]),
                Some(&Instr::Inc(r)) => {
                    if r >= regs.len() {
                        regs.resize(r + 1, 0);
                    }
                    regs[r] += 1;
                    pc += 1;
                }
                Some(&Instr::DecJz(r, target)) => {
                    if r >= regs.len() {
                        regs.resize(r + 1, 0);
                    }
                    if regs[r] == 0 {
                        pc = target;
                    } else {
                        regs[r] -= 1;
                        pc += 1;
                    }
                }
                Some(&Instr::Jump(target)) => pc = target,
            }
        }
        Halt::Running
    }
}

impl StepOracle for RegisterMachines {
    fn halts(&self, e: usize, s: usize) -> Halt {
        self.run(e, e as u64, s)
    }

    fn we_size(&self, n: usize, m: usize) -> usize {
        (0..m as u64).filter(|&x| self.run(n, x, m) != Halt::Running).count()
    }
}
