use crate::codec::{self, KvReader};
use crate::error::{Error, Result};
use crate::gf::{Gfp2, Modulus};
use crate::xtr::{self, XtrParams};

pub const REGISTRY_HEADER: &str = "xtr-vmss registry v1";

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RegistryEntry {
    pub index: u64,
    pub id: String,
    pub y: Gfp2,
}

impl RegistryEntry {
    pub(crate) fn to_line(&self) -> String {
        format!("participant={} {} {}", self.index, self.id, self.y.to_canonical())
    }

    pub(crate) fn parse_value(value: &str, p: &Modulus, line: usize) -> Result<RegistryEntry> {
        let f = codec::fields(line, value, 3)?;
        let index = codec::parse_u64(f[0], line)?;
        if index == 0 {
            return Err(Error::parse(line, "participant indices start at 1"));
        }
        codec::validate_id(f[1]).map_err(|e| Error::parse(line, e.to_string()))?;
        let y = Gfp2::parse_canonical(f[2], p, line)?;
        Ok(RegistryEntry {
            index,
            id: f[1].to_string(),
            y,
        })
    }
}

/// (ID, y) pairs ordered by participant index.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Registry {
    entries: Vec<RegistryEntry>,
}

impl Registry {
    pub fn new() -> Registry {
        Registry::default()
    }

    pub fn entries(&self) -> &[RegistryEntry] {
        &self.entries
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn by_index(&self, index: u64) -> Option<&RegistryEntry> {
        self.entries
            .binary_search_by_key(&index, |e| e.index)
            .ok()
            .map(|i| &self.entries[i])
    }

    pub fn by_id(&self, id: &str) -> Option<&RegistryEntry> {
        self.entries.iter().find(|e| e.id == id)
    }

    fn next_index(&self) -> u64 {
        self.entries.last().map_or(1, |e| e.index + 1)
    }

    /// Appends at `index`, which must exceed every index in use.
    pub(crate) fn insert_at(&self, index: u64, id: &str, y: Gfp2) -> Result<Registry> {
        codec::validate_id(id)?;
        if self.by_id(id).is_some() {
            return Err(Error::Identity(format!("participant {id:?} already registered")));
        }
        if self.entries.iter().any(|e| e.y == y) {
            return Err(Error::ShadowCollision);
        }
        if index < self.next_index() {
            return Err(Error::param(format!("participant index {index} already allocated")));
        }
        let mut entries = self.entries.clone();
        entries.push(RegistryEntry {
            index,
            id: id.to_string(),
            y,
        });
        Ok(Registry { entries })
    }

    pub fn remove(&self, id: &str) -> Result<Registry> {
        let pos = self
            .entries
            .iter()
            .position(|e| e.id == id)
            .ok_or_else(|| Error::Identity(format!("participant {id:?} is not registered")))?;
        let mut entries = self.entries.clone();
        entries.remove(pos);
        Ok(Registry { entries })
    }

    /// Same entries renumbered 1..m in order.
    pub fn reindexed(&self) -> Registry {
        Registry {
            entries: self
                .entries
                .iter()
                .enumerate()
                .map(|(i, e)| RegistryEntry {
                    index: i as u64 + 1,
                    ..e.clone()
                })
                .collect(),
        }
    }

    pub fn to_text(&self, p: &Modulus) -> String {
        let mut s = format!("{REGISTRY_HEADER}\np={}\n", p.value());
        for e in &self.entries {
            s.push_str(&e.to_line());
            s.push('\n');
        }
        s
    }

    pub fn parse(text: &str, p: &Modulus) -> Result<Registry> {
        let mut r = KvReader::new(codec::lines(text)?);
        r.expect_line(REGISTRY_HEADER)?;
        let (n, pv) = r.expect("p")?;
        if &codec::parse_uint(pv, n)? != p.value() {
            return Err(Error::parse(n, "registry belongs to a different prime"));
        }
        let mut reg = Registry::new();
        while r.peek_key().is_some() {
            let (n, v) = r.expect("participant")?;
            reg = reg.push_parsed(RegistryEntry::parse_value(v, p, n)?, n)?;
        }
        r.finish()?;
        Ok(reg)
    }

    pub(crate) fn push_parsed(&self, e: RegistryEntry, line: usize) -> Result<Registry> {
        self.insert_at(e.index, &e.id, e.y)
            .map_err(|err| Error::parse(line, err.to_string()))
    }
}

/// Appends (id, y) at the next participant index.
pub fn register(params: &XtrParams, registry: &Registry, id: &str, y: &Gfp2) -> Result<Registry> {
    if y.modulus() != params.p() {
        return Err(Error::ModulusMismatch("public shadow"));
    }
    xtr::require_public_shadow(params, y)?;
    registry.insert_at(registry.next_index(), id, y.clone())
}
