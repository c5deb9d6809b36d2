use std::collections::BTreeMap;
use std::fmt::{self, Write as _};
use std::str::FromStr;

use super::{PresentationError, ProfinitePresentation};
use crate::group::FinitePermGroup;
use crate::perm::Permutation;

/// How nodes of the tree are written out.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Encoding {
    /// One node per element of `G_k`, as an image list on the level's support.
    Block,
    /// One layer per natural number `n`: the sequence
    /// `g(0) g⁻¹(0) .. g(n) g⁻¹(n)` for each element `g`.
    Interleaved,
}

impl fmt::Display for Encoding {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Encoding::Block => "block",
            Encoding::Interleaved => "interleaved",
        })
    }
}

impl FromStr for Encoding {
    type Err = PresentationError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "block" => Ok(Encoding::Block),
            "interleaved" => Ok(Encoding::Interleaved),
            other => Err(PresentationError::Dump(format!("unknown encoding {other:?}"))),
        }
    }
}

fn bracketed(values: &[u32]) -> String {
    let parts: Vec<String> = values.iter().map(|v| v.to_string()).collect();
    format!("[{}]", parts.join(" "))
}

impl ProfinitePresentation {
    /// Serializes the tree down to `depth`.
    ///
    /// Block mode writes levels `0..=depth`; interleaved mode writes the
    /// layers for the points `0..depth`. Each line is
    /// `<level> <node-id> <parent-id> <sequence>`, ids are global and
    /// sequential, and roots have parent `-`.
    pub fn dump_tree(&self, depth: usize, encoding: Encoding) -> Result<String, PresentationError> {
        let layers: Vec<Vec<Vec<u32>>> = match encoding {
            Encoding::Block => (0..=depth)
                .map(|k| {
                    let level = self.level(k)?;
                    Ok(level.group().elements().iter().map(|e| e.images().to_vec()).collect())
                })
                .collect::<Result<_, PresentationError>>()?,
            Encoding::Interleaved => self.interleaved_layers(depth)?,
        };
        let mut out = format!("levels={} encoding={encoding}\n", layers.len());
        let mut next_id = 0usize;
        let mut previous: BTreeMap<&[u32], usize> = BTreeMap::new();
        for (k, layer) in layers.iter().enumerate() {
            let mut ids = BTreeMap::new();
            let parent_len = layers.get(k.wrapping_sub(1)).and_then(|l| l.first()).map(Vec::len);
            for node in layer {
                let parent = match parent_len {
                    None => "-".to_string(),
                    Some(n) => previous
                        .get(&node[..n])
                        .map(|id| id.to_string())
                        .ok_or_else(|| PresentationError::Dump(format!("orphan node {node:?}")))?,
                };
                writeln!(out, "{k} {next_id} {parent} {}", bracketed(node)).expect("writing to a String");
                ids.insert(node.as_slice(), next_id);
                next_id += 1;
            }
            previous = ids;
        }
        Ok(out)
    }

    fn interleaved_layers(&self, points: usize) -> Result<Vec<Vec<Vec<u32>>>, PresentationError> {
        let mut layers = Vec::with_capacity(points);
        let mut k = 0;
        for n in 0..points {
            while self.level(k)?.support() <= n {
                k += 1;
            }
            let level = self.level(k)?;
            let mut nodes: Vec<Vec<u32>> = level
                .group()
                .elements()
                .iter()
                .map(|g| {
                    let inv = g.inverse();
                    (0..=n).flat_map(|i| [g.apply(i) as u32, inv.apply(i) as u32]).collect()
                })
                .collect();
            nodes.sort();
            nodes.dedup();
            layers.push(nodes);
        }
        Ok(layers)
    }
}

/// Rebuilds a presentation from a block-mode dump. Levels beyond the dump are
/// extended by fixed singleton blocks.
pub fn parse_dump(text: &str) -> Result<ProfinitePresentation, PresentationError> {
    let err = |line: usize, msg: String| PresentationError::Dump(format!("line {line}: {msg}"));
    let mut lines = text.lines().enumerate().filter(|(_, l)| !l.trim().is_empty());
    let (_, header) = lines.next().ok_or_else(|| err(1, "empty dump".into()))?;
    let mut count = None;
    for field in header.split_whitespace() {
        match field.split_once('=') {
            Some(("levels", v)) => {
                count = Some(
                    v.parse::<usize>()
                        .map_err(|_| err(1, format!("bad level count {v:?}")))?,
                )
            }
            Some(("encoding", "block")) => {}
            Some(("encoding", other)) => {
                return Err(err(1, format!("only block dumps can be imported, found {other:?}")))
            }
            _ => return Err(err(1, format!("unexpected header field {field:?}"))),
        }
    }
    let count = count.ok_or_else(|| err(1, "header lacks levels=".into()))?;
    let mut elements: Vec<Vec<Permutation>> = vec![Vec::new(); count];
    let mut by_id: BTreeMap<usize, (usize, Permutation)> = BTreeMap::new();
    for (i, line) in lines {
        let lineno = i + 1;
        let mut parts = line.splitn(4, ' ');
        let (Some(level), Some(id), Some(parent), Some(images)) =
            (parts.next(), parts.next(), parts.next(), parts.next())
        else {
            return Err(err(lineno, "expected <level> <id> <parent> <images>".into()));
        };
        let level: usize = level.parse().map_err(|_| err(lineno, format!("bad level {level:?}")))?;
        let id: usize = id.parse().map_err(|_| err(lineno, format!("bad id {id:?}")))?;
        if level >= count {
            return Err(err(lineno, format!("level {level} beyond the declared {count}")));
        }
        let perm = Permutation::from_image_list(images).map_err(|e| err(lineno, e.to_string()))?;
        if level == 0 {
            if parent != "-" {
                return Err(err(lineno, "level-0 nodes have no parent".into()));
            }
        } else {
            let pid: usize = parent
                .parse()
                .map_err(|_| err(lineno, format!("bad parent {parent:?}")))?;
            let (plevel, pperm) = by_id
                .get(&pid)
                .ok_or_else(|| err(lineno, format!("unknown parent {pid}")))?;
            if *plevel + 1 != level || perm.prefix(pperm.len()).ok().as_ref() != Some(pperm) {
                return Err(err(lineno, format!("node {id} does not extend its parent {pid}")));
            }
        }
        if by_id.insert(id, (level, perm.clone())).is_some() {
            return Err(err(lineno, format!("duplicate id {id}")));
        }
        elements[level].push(perm);
    }
    let mut levels = Vec::with_capacity(count);
    let mut blocks = Vec::new();
    let mut support = 0;
    for (k, els) in elements.into_iter().enumerate() {
        let n = els
            .first()
            .map(Permutation::len)
            .ok_or_else(|| PresentationError::Dump(format!("level {k} has no nodes")))?;
        if n <= support {
            return Err(PresentationError::Dump(format!("level {k} does not add a block")));
        }
        blocks.push(support..n);
        support = n;
        let g = FinitePermGroup::from_parts(n, els, blocks.clone())?;
        if !g.check_closed() {
            return Err(PresentationError::Dump(format!("level {k} is not a group")));
        }
        levels.push(g);
    }
    let p = ProfinitePresentation::from_levels("dump", levels)?;
    // runs the coherence checks on every imported level
    if count > 0 {
        p.level(count - 1)?;
    }
    Ok(p)
}
