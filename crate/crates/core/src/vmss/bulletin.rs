use std::collections::BTreeSet;

use crate::codec::{self, KvReader};
use crate::error::{Error, Result};
use crate::gf::{Gfp, Gfp2, Gfp6, SexticField};
use crate::nlr;
use crate::xtr::{self, XtrParams};

use super::registry::{Registry, RegistryEntry};
use super::Scheme;

pub const BULLETIN_HEADER: &str = "xtr-vmss bulletin v1";

/// E_i and T_i for participant `index`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PublishedShare {
    pub index: u64,
    pub e: Gfp,
    pub t: Gfp6,
}

/// z for secret `slot`, masked by the sequence term at `index`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Mask {
    pub slot: usize,
    pub index: u64,
    pub z: Gfp,
}

/// Everything the dealer publishes.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Bulletin {
    pub(crate) params: XtrParams,
    /// Tr(g^b).
    pub(crate) header: Gfp2,
    pub(crate) scheme: Scheme,
    pub(crate) k: usize,
    pub(crate) registry: Registry,
    /// Parallel to `registry`.
    pub(crate) shares: Vec<PublishedShare>,
    pub(crate) masks: Vec<Mask>,
    pub(crate) c: Gfp,
    pub(crate) tail: [(u64, Gfp); 2],
}

impl Bulletin {
    pub fn params(&self) -> &XtrParams {
        &self.params
    }

    pub fn header(&self) -> &Gfp2 {
        &self.header
    }

    pub fn scheme(&self) -> Scheme {
        self.scheme
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn registry(&self) -> &Registry {
        &self.registry
    }

    pub fn shares(&self) -> &[PublishedShare] {
        &self.shares
    }

    pub fn share(&self, index: u64) -> Option<&PublishedShare> {
        self.shares
            .binary_search_by_key(&index, |s| s.index)
            .ok()
            .map(|i| &self.shares[i])
    }

    pub fn masks(&self) -> &[Mask] {
        &self.masks
    }

    pub fn c(&self) -> &Gfp {
        &self.c
    }

    pub fn tail(&self) -> &[(u64, Gfp); 2] {
        &self.tail
    }

    pub fn m(&self) -> usize {
        self.registry.len()
    }

    pub fn l(&self) -> usize {
        self.masks.len()
    }

    /// λ, p, q, g, Tr(g), Tr(g^b); one per (ID, y); E; T; z; c; two tail terms.
    pub fn public_item_count(&self) -> usize {
        6 + self.registry.len() + 2 * self.shares.len() + self.masks.len() + 3
    }

    pub fn to_text(&self) -> String {
        let p = &self.params;
        let mut s = String::new();
        s.push_str(BULLETIN_HEADER);
        s.push_str("\n[params]\n");
        s.push_str(&format!(
            "lambda={}\np={}\nq={}\ng={}\ntr_g={}\ntr_gb={}\n",
            p.lambda(),
            p.p().value(),
            p.q().value(),
            p.g().to_canonical(),
            p.c().to_canonical(),
            self.header.to_canonical()
        ));
        s.push_str("[registry]\n");
        for e in self.registry.entries() {
            s.push_str(&e.to_line());
            s.push('\n');
        }
        s.push_str(&format!(
            "[construction]\nscheme={}\nthreshold={}\n",
            self.scheme, self.k
        ));
        for sh in &self.shares {
            s.push_str(&format!("E={} {}\n", sh.index, sh.e.value()));
        }
        for sh in &self.shares {
            s.push_str(&format!("T={} {}\n", sh.index, sh.t.to_canonical()));
        }
        for mk in &self.masks {
            s.push_str(&format!("z={} {} {}\n", mk.slot, mk.index, mk.z.value()));
        }
        s.push_str(&format!("c={}\n", self.c.value()));
        for (i, v) in &self.tail {
            s.push_str(&format!("tail={i} {}\n", v.value()));
        }
        s.push_str(&format!("items={}\n", self.public_item_count()));
        s
    }

    pub fn parse(text: &str) -> Result<Bulletin> {
        let mut r = KvReader::new(codec::lines(text)?);
        r.expect_line(BULLETIN_HEADER)?;
        r.expect_line("[params]")?;
        let (n, v) = r.expect("lambda")?;
        let lambda = xtr::parse_lambda(v, n)?;
        let (n, v) = r.expect("p")?;
        let p = codec::parse_uint(v, n)?;
        let (n, v) = r.expect("q")?;
        let q = codec::parse_uint(v, n)?;
        xtr::check_primes(lambda, &p, &q).map_err(|e| Error::parse(n, e.to_string()))?;
        let (g_line, g_text) = r.expect("g")?;
        let (n, v) = r.expect("tr_g")?;
        let pm = crate::gf::Modulus::new(p.clone());
        let c = Gfp2::parse_canonical(v, &pm, n)?;
        let field = SexticField::new(c.clone()).map_err(|e| Error::parse(n, e.to_string()))?;
        let g = Gfp6::parse_canonical(g_text, &field, g_line)?;
        let params = XtrParams::from_public(lambda, p, q, c, g)
            .map_err(|e| Error::parse(g_line, e.to_string()))?;
        let (n, v) = r.expect("tr_gb")?;
        let header = Gfp2::parse_canonical(v, params.p(), n)?;

        r.expect_line("[registry]")?;
        let mut registry = Registry::new();
        while r.peek_key() == Some("participant") {
            let (n, v) = r.expect("participant")?;
            let entry = RegistryEntry::parse_value(v, params.p(), n)?;
            xtr::require_public_shadow(&params, &entry.y).map_err(|e| Error::parse(n, e.to_string()))?;
            registry = registry.push_parsed(entry, n)?;
        }

        r.expect_line("[construction]")?;
        let (n, v) = r.expect("scheme")?;
        let scheme: Scheme = v.parse().map_err(|e: Error| Error::parse(n, e.to_string()))?;
        let (n, v) = r.expect("threshold")?;
        let k = codec::parse_u64(v, n)? as usize;
        if k == 0 {
            return Err(Error::parse(n, "threshold must be positive"));
        }
        nlr::check_binomial_bound(k, params.q()).map_err(|e| Error::parse(n, e.to_string()))?;

        let q = params.q().clone();
        let mut es = Vec::with_capacity(registry.len());
        for entry in registry.entries() {
            let (n, v) = r.expect("E")?;
            let f = codec::fields(n, v, 2)?;
            if codec::parse_u64(f[0], n)? != entry.index {
                return Err(Error::parse(n, "E index does not follow the registry"));
            }
            es.push(Gfp::parse_canonical(f[1], &q, n)?);
        }
        let mut shares = Vec::with_capacity(registry.len());
        for (entry, e) in registry.entries().iter().zip(es) {
            let (n, v) = r.expect("T")?;
            let f = codec::fields(n, v, 2)?;
            if codec::parse_u64(f[0], n)? != entry.index {
                return Err(Error::parse(n, "T index does not follow the registry"));
            }
            let t = Gfp6::parse_canonical(f[1], params.field(), n)?;
            shares.push(PublishedShare {
                index: entry.index,
                e,
                t,
            });
        }

        let mut used: BTreeSet<u64> = shares.iter().map(|s| s.index - 1).collect();
        let mut masks: Vec<Mask> = Vec::new();
        while r.peek_key() == Some("z") {
            let (n, v) = r.expect("z")?;
            let f = codec::fields(n, v, 3)?;
            let slot = codec::parse_u64(f[0], n)? as usize;
            let index = codec::parse_u64(f[1], n)?;
            if slot == 0 || masks.last().is_some_and(|mk| mk.slot >= slot) {
                return Err(Error::parse(n, "mask slots must be positive and increasing"));
            }
            if !used.insert(index) {
                return Err(Error::parse(n, "mask reuses a sequence index"));
            }
            masks.push(Mask {
                slot,
                index,
                z: Gfp::parse_canonical(f[2], &q, n)?,
            });
        }
        let (n, v) = r.expect("c")?;
        let c = Gfp::parse_canonical(v, &q, n)?;
        if c.is_zero() {
            return Err(Error::parse(n, "recursion constant must be nonzero"));
        }
        let mut tail = Vec::with_capacity(2);
        for _ in 0..2 {
            let (n, v) = r.expect("tail")?;
            let f = codec::fields(n, v, 2)?;
            let index = codec::parse_u64(f[0], n)?;
            if !used.insert(index) {
                return Err(Error::parse(n, "tail reuses a sequence index"));
            }
            tail.push((index, Gfp::parse_canonical(f[1], &q, n)?));
        }
        if let Some(&max) = used.last() {
            super::check_index_fits(&params, max).map_err(|e| Error::parse(r.line(), e.to_string()))?;
        }
        let (n, v) = r.expect("items")?;
        let items = codec::parse_u64(v, n)?;
        r.finish()?;
        let mut tail = tail.into_iter();
        let bulletin = Bulletin {
            params,
            header,
            scheme,
            k,
            registry,
            shares,
            masks,
            c,
            tail: [tail.next().unwrap(), tail.next().unwrap()],
        };
        if items != bulletin.public_item_count() as u64 {
            return Err(Error::parse(
                n,
                format!(
                    "item count {items} differs from {}",
                    bulletin.public_item_count()
                ),
            ));
        }
        Ok(bulletin)
    }
}
