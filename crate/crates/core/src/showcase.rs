//! End-to-end rebuild of the (144,66,30) design from the embedded data.

use serde::Serialize;

use crate::blocks::minimal_block_systems;
use crate::catalog::{load_group, load_points};
use crate::design::{construct_design, DesignParams, ImprimitivityProfile};
use crate::error::Result;

#[derive(Clone, Debug, Serialize)]
pub struct M12DesignSummary {
    pub blocks: usize,
    /// `None` when the block orbit is not a symmetric design.
    pub params: Option<DesignParams>,
    pub refutation: Option<String>,
    pub flag_transitive: bool,
    pub anti_flag_transitive: bool,
    /// (number of classes, class size) per minimal block system.
    pub systems: Vec<(usize, usize)>,
    /// 1-based class containing point 1, per system.
    pub classes_with_first_point: Vec<Vec<usize>>,
    pub profiles: Vec<Option<ImprimitivityProfile>>,
}

impl M12DesignSummary {
    pub fn design_found(&self) -> bool {
        self.params.is_some() && self.blocks == self.params.map_or(0, |p| p.v as usize)
    }

    /// One-line summary, e.g. `(144,66,30) design-found; flag-transitive: yes; ...`.
    pub fn line(&self) -> String {
        let yes_no = |b: bool| if b { "yes" } else { "no" };
        let head = match (&self.params, &self.refutation) {
            (Some(p), _) if self.design_found() => format!("{p} design-found"),
            (_, Some(r)) => format!("not-a-design ({r})"),
            _ => "not-a-design".to_string(),
        };
        let mut shapes: Vec<String> = self
            .systems
            .iter()
            .map(|(d, c)| format!("{d} classes of {c}"))
            .collect();
        shapes.dedup();
        let systems = match shapes.as_slice() {
            [one] => format!("{}×({one})", self.systems.len()),
            [] => "none".to_string(),
            many => many.join(", "),
        };
        let mut profiles: Vec<String> = self
            .profiles
            .iter()
            .map(|p| p.map_or("refuted".to_string(), |p| p.to_string()))
            .collect();
        profiles.dedup();
        format!(
            "{head}; flag-transitive: {}; anti-flag-transitive: {}; systems: {systems}; (c,d,ℓ,s)={}",
            yes_no(self.flag_transitive),
            yes_no(self.anti_flag_transitive),
            profiles.join(" / ")
        )
    }
}

pub fn reproduce_m12_design() -> Result<M12DesignSummary> {
    let g = load_group("m12-144/G")?;
    let base = load_points("m12-144/base-block")?;
    let orbit = construct_design(&g, &base)?;
    let design = orbit.design;
    let verified = design.verify_symmetric();
    let (params, refutation) = match &verified {
        Ok(p) => (Some(*p), None),
        Err(r) => (None, Some(r.to_string())),
    };
    let usable = params.is_some_and(|p| p.is_nontrivial());
    let flag_transitive = usable && design.is_flag_transitive(&g, false)?;
    let anti_flag_transitive = usable && design.is_anti_flag_transitive(&g, false)?;
    let systems = minimal_block_systems(&g)?;
    Ok(M12DesignSummary {
        blocks: orbit.orbit_len,
        params,
        refutation,
        flag_transitive,
        anti_flag_transitive,
        systems: systems.iter().map(|s| (s.num_classes(), s.class_size())).collect(),
        classes_with_first_point: systems
            .iter()
            .map(|s| s.classes()[s.class_of(0)].iter().map(|p| p + 1).collect())
            .collect(),
        profiles: systems.iter().map(|s| design.profile_for(s).ok()).collect(),
    })
}
