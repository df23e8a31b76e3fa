//! Datasets compiled into the library, each pinned by a SHA-256 checksum.

use sha2::{Digest, Sha256};

use crate::design::Design;
use crate::error::{Error, Result};
use crate::group::PermGroup;
use crate::io::{parse_design_file, parse_group_file, parse_point_list};
use crate::pipeline::Catalog;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Kind {
    Group,
    PointSet,
    Design,
    Catalog,
}

#[derive(Debug)]
pub struct Dataset {
    pub id: &'static str,
    pub kind: Kind,
    pub description: &'static str,
    pub payload: &'static str,
    pub sha256: &'static str,
}

#[derive(Debug, Clone)]
pub enum Loaded {
    Group(PermGroup),
    PointSet(Vec<usize>),
    Design(Design),
    Catalog(Catalog),
}

static DATASETS: &[Dataset] = &[
    Dataset {
        id: "m12-144/G",
        kind: Kind::Group,
        description: "M12 in its rank-5 action on 144 points",
        payload: include_str!("../data/m12-144-G.group"),
        sha256: "87640ae039b27d695889787e7f031c1e9826c86a2c534eef011109ad19fc54a1",
    },
    Dataset {
        id: "m12-144/H",
        kind: Kind::Group,
        description: "stabilizer of point 1 in m12-144/G, a PSL(2,11)",
        payload: include_str!("../data/m12-144-H.group"),
        sha256: "7ba37baa9e335ad39f6e0cc4eac31901b399b48656b5b68c619ffd7f4dc6f5a5",
    },
    Dataset {
        id: "m12-144/K",
        kind: Kind::Group,
        description: "stabilizer of the base block in m12-144/G, a PSL(2,11)",
        payload: include_str!("../data/m12-144-K.group"),
        sha256: "2eca45398466550d9efaf819ef45dc676bd0db9c57c0049cc74c81045cb0c292",
    },
    Dataset {
        id: "m12-144/base-block",
        kind: Kind::PointSet,
        description: "66-point base block of the (144,66,30) design",
        payload: include_str!("../data/m12-144-base-block.txt"),
        sha256: "6ad5ca3efbf8b617e32986ecbd76a4172d6d53533a7ff81a0cbe7901742455ca",
    },
    Dataset {
        id: "fixtures/fano",
        kind: Kind::Design,
        description: "Fano plane from the difference set {1,2,4} mod 7",
        payload: include_str!("../data/fixtures/fano.design"),
        sha256: "16a275df061188e3357d52e690f0b10ce74e2af68a4cef94e64ff5e62f340cab",
    },
    Dataset {
        id: "fixtures/frobenius21",
        kind: Kind::Group,
        description: "Frobenius group of order 21 on 7 points",
        payload: include_str!("../data/fixtures/frobenius21.group"),
        sha256: "b7557ad4b6cc00179c6df57022576113badfcd3264ef567e394c66e1f927f952",
    },
    Dataset {
        id: "catalogs/m12",
        kind: Kind::Catalog,
        description: "M12 on 12 points with its eleven maximal subgroup classes",
        payload: include_str!("../data/catalogs/m12.json"),
        sha256: "5dbde08916158650094ba37b8dcc89ba4d48c77ac4274f635da60e0f2423c368",
    },
    Dataset {
        id: "catalogs/fi22-stub",
        kind: Kind::Catalog,
        description: "Fi22 with its two O7(3) classes, orders and maximal indices only",
        payload: include_str!("../data/catalogs/fi22-stub.json"),
        sha256: "eba44b20ab6307f7a2d6805ae1a7a4c6ba1c02e5ccbc3ea72a6f22dac7b003c4",
    },
];

pub fn datasets() -> &'static [Dataset] {
    DATASETS
}

pub fn find(id: &str) -> Result<&'static Dataset> {
    DATASETS
        .iter()
        .find(|d| d.id == id)
        .ok_or_else(|| Error::UnknownDataset(id.to_string()))
}

fn hex(bytes: &[u8]) -> String {
    bytes.iter().map(|b| format!("{b:02x}")).collect()
}

impl Dataset {
    pub fn verify(&self) -> Result<()> {
        let digest = hex(&Sha256::digest(self.payload.as_bytes()));
        if digest != self.sha256 {
            return Err(Error::Checksum(format!(
                "{}: expected {}, got {digest}",
                self.id, self.sha256
            )));
        }
        Ok(())
    }

    pub fn load(&self) -> Result<Loaded> {
        self.verify()?;
        Ok(match self.kind {
            Kind::Group => Loaded::Group(parse_group_file(self.payload)?.group),
            Kind::PointSet => Loaded::PointSet(parse_point_list(self.payload, None)?),
            Kind::Design => Loaded::Design(parse_design_file(self.payload)?),
            Kind::Catalog => Loaded::Catalog(Catalog::from_json(self.payload)?),
        })
    }
}

pub fn load(id: &str) -> Result<Loaded> {
    find(id)?.load()
}

fn wrong_kind(id: &str, want: &str) -> Error {
    Error::Catalog(format!("dataset {id} is not a {want}"))
}

pub fn load_group(id: &str) -> Result<PermGroup> {
    match load(id)? {
        Loaded::Group(g) => Ok(g),
        _ => Err(wrong_kind(id, "group")),
    }
}

pub fn load_points(id: &str) -> Result<Vec<usize>> {
    match load(id)? {
        Loaded::PointSet(p) => Ok(p),
        _ => Err(wrong_kind(id, "point set")),
    }
}

pub fn load_design(id: &str) -> Result<Design> {
    match load(id)? {
        Loaded::Design(d) => Ok(d),
        _ => Err(wrong_kind(id, "design")),
    }
}

pub fn load_catalog(id: &str) -> Result<Catalog> {
    match load(id)? {
        Loaded::Catalog(c) => Ok(c),
        _ => Err(wrong_kind(id, "catalog")),
    }
}
