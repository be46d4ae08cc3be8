use crate::codec::{self, KvReader};
use crate::error::{Error, Result};
use crate::gf::{Gfp, Gfp2, Modulus};
use crate::xtr::{XtrKeypair, XtrParams};

pub const SHARE_HEADER: &str = "xtr-vmss share v1";
pub const KEY_HEADER: &str = "xtr-vmss key v1";

/// A subshadow submitted for recovery, bound to a claimed position.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RecoveryShare {
    pub id: String,
    pub index: u64,
    pub u: Gfp,
}

impl RecoveryShare {
    pub fn to_text(&self) -> String {
        format!(
            "{SHARE_HEADER}\nid={}\nindex={}\nu={}\n",
            self.id,
            self.index,
            self.u.value()
        )
    }

    pub fn parse(text: &str, q: &Modulus) -> Result<RecoveryShare> {
        let mut r = KvReader::new(codec::lines(text)?);
        r.expect_line(SHARE_HEADER)?;
        let (n, id) = r.expect("id")?;
        codec::validate_id(id).map_err(|e| Error::parse(n, e.to_string()))?;
        let (n, v) = r.expect("index")?;
        let index = codec::parse_u64(v, n)?;
        if index == 0 {
            return Err(Error::parse(n, "participant indices start at 1"));
        }
        let (n, v) = r.expect("u")?;
        let u = Gfp::parse_canonical(v, q, n)?;
        r.finish()?;
        Ok(RecoveryShare {
            id: id.to_string(),
            index,
            u,
        })
    }
}

/// A participant's identity and key pair. Holds the private key.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct KeyFile {
    pub id: String,
    pub keypair: XtrKeypair,
}

impl KeyFile {
    pub fn to_text(&self) -> String {
        format!(
            "{KEY_HEADER}\nid={}\nx={}\ny={}\n",
            self.id,
            self.keypair.private(),
            self.keypair.public().to_canonical()
        )
    }

    pub fn parse(text: &str, params: &XtrParams) -> Result<KeyFile> {
        let mut r = KvReader::new(codec::lines(text)?);
        r.expect_line(KEY_HEADER)?;
        let (n, id) = r.expect("id")?;
        codec::validate_id(id).map_err(|e| Error::parse(n, e.to_string()))?;
        let (n, v) = r.expect("x")?;
        let x = codec::parse_uint(v, n)?;
        let keypair =
            XtrKeypair::from_private(params, x).map_err(|e| Error::parse(n, e.to_string()))?;
        let (n, v) = r.expect("y")?;
        let y = Gfp2::parse_canonical(v, params.p(), n)?;
        if &y != keypair.public() {
            return Err(Error::parse(n, "public key does not match the private key"));
        }
        r.finish()?;
        Ok(KeyFile {
            id: id.to_string(),
            keypair,
        })
    }
}
