use super::{PresentationError, ProfinitePresentation};
use crate::group::FinitePermGroup;
use crate::perm::Permutation;

fn import_err(msg: String) -> PresentationError {
    PresentationError::Import(msg)
}

/// An abstract finite group on `{0, .., n-1}` given by its multiplication table.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TableGroup {
    table: Vec<Vec<usize>>,
    identity: usize,
    inverses: Vec<usize>,
}

impl TableGroup {
    /// Validates closure, associativity, identity and inverses.
    pub fn new(table: Vec<Vec<usize>>) -> Result<Self, PresentationError> {
        let n = table.len();
        if n == 0 {
            return Err(import_err("empty multiplication table".into()));
        }
        for (a, row) in table.iter().enumerate() {
            if row.len() != n {
                return Err(import_err(format!("row {a} has {} entries, expected {n}", row.len())));
            }
            if let Some(&bad) = row.iter().find(|&&c| c >= n) {
                return Err(import_err(format!(
                    "row {a} names element {bad} of a group of order {n}"
                )));
            }
        }
        let identity = (0..n)
            .find(|&e| (0..n).all(|a| table[e][a] == a && table[a][e] == a))
            .ok_or_else(|| import_err("no identity element".into()))?;
        let mut inverses = Vec::with_capacity(n);
        for (a, row) in table.iter().enumerate() {
            let inv = (0..n)
                .find(|&b| row[b] == identity && table[b][a] == identity)
                .ok_or_else(|| import_err(format!("element {a} has no inverse")))?;
            inverses.push(inv);
        }
        for a in 0..n {
            for b in 0..n {
                for c in 0..n {
                    if table[table[a][b]][c] != table[a][table[b][c]] {
                        return Err(import_err(format!("not associative at ({a}, {b}, {c})")));
                    }
                }
            }
        }
        Ok(TableGroup {
            table,
            identity,
            inverses,
        })
    }

    /// `Z/n` with addition.
    pub fn cyclic(n: usize) -> Self {
        let table = (0..n).map(|a| (0..n).map(|b| (a + b) % n).collect()).collect();
        TableGroup::new(table).expect("addition mod n is a group")
    }

    pub fn order(&self) -> usize {
        self.table.len()
    }

    pub fn mul(&self, a: usize, b: usize) -> usize {
        self.table[a][b]
    }

    pub fn identity(&self) -> usize {
        self.identity
    }

    pub fn inverse(&self, a: usize) -> usize {
        self.inverses[a]
    }

    /// `x ↦ x · a⁻¹` on the element indices: a homomorphism into the
    /// symmetric group under right-to-left composition.
    fn right_regular(&self, a: usize) -> Permutation {
        let ai = self.inverse(a);
        let images = (0..self.order()).map(|x| self.mul(x, ai) as u32).collect();
        Permutation::new(images).expect("row of a group table is a bijection")
    }
}

/// Finite groups `P_0, P_1, ..` with surjective homomorphisms
/// `maps[n]: P_{n+1} → P_n` given as value tables.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct InverseSystem {
    groups: Vec<TableGroup>,
    maps: Vec<Vec<usize>>,
}

impl InverseSystem {
    pub fn new(groups: Vec<TableGroup>, maps: Vec<Vec<usize>>) -> Result<Self, PresentationError> {
        if groups.is_empty() {
            return Err(import_err("at least one group is required".into()));
        }
        if maps.len() + 1 != groups.len() {
            return Err(import_err(format!(
                "{} groups need {} maps, found {}",
                groups.len(),
                groups.len() - 1,
                maps.len()
            )));
        }
        for (n, map) in maps.iter().enumerate() {
            let (lo, hi) = (&groups[n], &groups[n + 1]);
            if map.len() != hi.order() {
                return Err(import_err(format!(
                    "map {n} has {} values, expected {}",
                    map.len(),
                    hi.order()
                )));
            }
            if let Some(&bad) = map.iter().find(|&&v| v >= lo.order()) {
                return Err(import_err(format!("map {n} sends to {bad}, outside the target")));
            }
            let mut hit = vec![false; lo.order()];
            for &v in map {
                hit[v] = true;
            }
            if let Some(missed) = hit.iter().position(|h| !h) {
                return Err(import_err(format!("map {n} is not surjective: misses {missed}")));
            }
            for a in 0..hi.order() {
                for b in 0..hi.order() {
                    if map[hi.mul(a, b)] != lo.mul(map[a], map[b]) {
                        return Err(import_err(format!("map {n} is not a homomorphism at ({a}, {b})")));
                    }
                }
            }
        }
        Ok(InverseSystem { groups, maps })
    }

    /// `Z/2 ← Z/4 ← .. ← Z/2^levels`, each map reducing residues.
    pub fn cyclic_two_power(levels: usize) -> Self {
        InverseSystem::cyclic_tower(&(1..=levels).map(|k| 1usize << k).collect::<Vec<_>>())
            .expect("reduction between dividing moduli is a surjective homomorphism")
    }

    /// `Z/m_0 ← Z/m_1 ← ..` with residue reduction; each modulus must divide the next.
    pub fn cyclic_tower(moduli: &[usize]) -> Result<Self, PresentationError> {
        if moduli.contains(&0) {
            return Err(import_err("moduli must be positive".into()));
        }
        let groups = moduli.iter().map(|&m| TableGroup::cyclic(m)).collect();
        let mut maps = Vec::new();
        for w in moduli.windows(2) {
            if w[1] % w[0] != 0 {
                return Err(import_err(format!("{} does not divide {}", w[0], w[1])));
            }
            maps.push((0..w[1]).map(|x| x % w[0]).collect());
        }
        InverseSystem::new(groups, maps)
    }

    pub fn groups(&self) -> &[TableGroup] {
        &self.groups
    }

    pub fn maps(&self) -> &[Vec<usize>] {
        &self.maps
    }

    /// Level `k` holds `f_k(p)` for `p ∈ P_k`: the image of `p` under the
    /// chain of maps down to each `P_j`, each acting right-regularly on its
    /// own block of `|P_j|` points. Past the last group the tower is extended
    /// by fixed singleton blocks.
    pub fn import(&self) -> Result<ProfinitePresentation, PresentationError> {
        let mut levels = Vec::with_capacity(self.groups.len());
        let mut blocks = Vec::new();
        let mut support = 0;
        // previous[p] = f_{k-1}(p)
        let mut previous: Vec<Permutation> = Vec::new();
        for (k, group) in self.groups.iter().enumerate() {
            blocks.push(support..support + group.order());
            support += group.order();
            let current: Vec<Permutation> = (0..group.order())
                .map(|p| {
                    let own = group.right_regular(p);
                    if k == 0 {
                        own
                    } else {
                        previous[self.maps[k - 1][p]].concat(&own)
                    }
                })
                .collect();
            levels.push(FinitePermGroup::from_parts(support, current.clone(), blocks.clone())?);
            previous = current;
        }
        ProfinitePresentation::from_levels("inverse_system", levels)
    }
}

/// Presentation of the inverse limit of `sys`; see [`InverseSystem::import`].
pub fn import_inverse_system(sys: &InverseSystem) -> Result<ProfinitePresentation, PresentationError> {
    sys.import()
}
