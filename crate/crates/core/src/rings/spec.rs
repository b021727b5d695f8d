use serde::{Deserialize, Serialize};

use super::{Ring, RingKind};
use crate::error::{Error, Result};

fn default_epsilon() -> i8 {
    -1
}

/// JSON form of a ring, e.g. `{"kind":"modular","m":5}`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum RingSpecJson {
    Integers,
    Modular {
        m: u64,
    },
    Free {
        gens: Vec<String>,
        #[serde(default)]
        involution: bool,
        #[serde(default = "default_epsilon")]
        epsilon: i8,
    },
    GroupRing {
        perm_gens: Vec<Vec<u32>>,
    },
}

impl RingSpecJson {
    pub fn parse(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::Parse {
            pos: e.column(),
            msg: format!("ring spec: {e}"),
        })
    }

    pub fn build(&self) -> Result<Ring> {
        match self {
            RingSpecJson::Integers => Ok(Ring::integers()),
            RingSpecJson::Modular { m } => Ring::modular(*m),
            RingSpecJson::Free {
                gens,
                involution,
                epsilon,
            } => Ring::free(gens, *involution, *epsilon),
            RingSpecJson::GroupRing { perm_gens } => Ring::group_ring(perm_gens),
        }
    }
}

impl Ring {
    pub fn from_json(text: &str) -> Result<Ring> {
        RingSpecJson::parse(text)?.build()
    }

    pub fn to_spec(&self) -> RingSpecJson {
        match self.kind() {
            RingKind::Integers => RingSpecJson::Integers,
            RingKind::Modular { m } => RingSpecJson::Modular { m: *m },
            RingKind::Free {
                gens,
                involution,
                epsilon,
            } => RingSpecJson::Free {
                gens: gens.clone(),
                involution: *involution,
                epsilon: *epsilon,
            },
            RingKind::GroupRing(g) => RingSpecJson::GroupRing {
                perm_gens: g.perm_gens(),
            },
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_catalog_specs() {
        assert_eq!(Ring::from_json(r#"{"kind":"modular","m":5}"#).unwrap(), Ring::modular(5).unwrap());
        assert_eq!(Ring::from_json(r#"{"kind":"integers"}"#).unwrap(), Ring::integers());
        let f = Ring::from_json(r#"{"kind":"free","gens":["x","y"],"involution":true,"epsilon":-1}"#)
            .unwrap();
        assert!(f.has_involution());
        let g = Ring::from_json(r#"{"kind":"group_ring","perm_gens":[[2,1,3],[2,3,1]]}"#).unwrap();
        assert_eq!(g.group().unwrap().order(), 6);
        assert_eq!(Ring::from_json(&serde_json::to_string(&g.to_spec()).unwrap()).unwrap(), g);
    }

    #[test]
    fn reports_bad_specs() {
        assert!(matches!(Ring::from_json(r#"{"kind":"modular","m":1}"#), Err(Error::Spec(_))));
        assert!(matches!(Ring::from_json(r#"{"kind":"modular"}"#), Err(Error::Parse { .. })));
        assert!(matches!(Ring::from_json(r#"{"kind":"field"}"#), Err(Error::Parse { .. })));
    }
}
