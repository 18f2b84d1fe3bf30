//! Grouped detection layout for the 42 non-reference mandibular landmarks.

use crate::landmarks::registry;
use crate::{CoreError, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
pub enum PatchSource {
    /// 3D patches cut from the binarized mandible volume.
    Mandible3D,
    /// 2D patches cut from the partially integrated midsagittal image.
    Midsagittal2D,
}

/// A set of landmarks detected jointly by one CNN; the network output is the
/// concatenated member positions in registry index order.
#[derive(Debug, Clone, PartialEq, serde::Serialize, serde::Deserialize)]
pub struct DetectorGroup {
    pub id: String,
    /// 1-based registry indices, ascending.
    pub members: Vec<usize>,
    pub source: PatchSource,
}

impl DetectorGroup {
    pub fn new(id: &str, mut members: Vec<usize>, source: PatchSource) -> Self {
        members.sort_unstable();
        Self { id: id.to_string(), members, source }
    }

    /// 3 coords per member for 3D patches, 2 for 2D.
    pub fn output_dim(&self) -> usize {
        match self.source {
            PatchSource::Mandible3D => 3 * self.members.len(),
            PatchSource::Midsagittal2D => 2 * self.members.len(),
        }
    }
}

/// The default nine-group partition of the 42 non-reference mandibular
/// landmarks. The condyle groups are fixed anatomy; the rest is a
/// reconstruction and can be overridden in the pipeline config.
pub fn default_groups() -> Vec<DetectorGroup> {
    let reg = registry();
    use PatchSource::Mandible3D;
    vec![
        DetectorGroup::new("condyle-L", reg.condyle_group_left(), Mandible3D),
        DetectorGroup::new("condyle-R", reg.condyle_group_right(), Mandible3D),
        DetectorGroup::new("ramus-gonion-L", vec![57, 58, 59, 60, 65, 66], Mandible3D),
        DetectorGroup::new("ramus-gonion-R", vec![76, 77, 78, 79, 84, 85], Mandible3D),
        DetectorGroup::new("dentition-L", vec![49, 61, 62], Mandible3D),
        DetectorGroup::new("dentition-R", vec![50, 80, 81], Mandible3D),
        DetectorGroup::new("symphysis", vec![67, 68, 69], Mandible3D),
        DetectorGroup::new("condylar-foraminal-mid", vec![51, 70, 86, 87], Mandible3D),
        DetectorGroup::new("incisal-foraminal-mid", vec![55, 74, 88, 89, 90], Mandible3D),
    ]
}

/// Check that 3D groups partition the 42 non-reference mandibular landmarks
/// and that the condyle groups hold exactly the six condylar landmarks per
/// side.
pub fn validate_partition(groups: &[DetectorGroup]) -> Result<()> {
    let reg = registry();
    let mut covered = vec![false; 91];
    for g in groups {
        if g.source != PatchSource::Mandible3D {
            continue;
        }
        for &m in &g.members {
            if !(47..=90).contains(&m) || reg.get(m).is_reference {
                return Err(CoreError::Landmarks(format!(
                    "group `{}`: landmark {m} is not a non-reference mandibular landmark",
                    g.id
                )));
            }
            if covered[m] {
                return Err(CoreError::Landmarks(format!(
                    "landmark {m} appears in more than one group"
                )));
            }
            covered[m] = true;
        }
    }
    let n_covered = covered.iter().filter(|&&c| c).count();
    if n_covered != 42 {
        return Err(CoreError::Landmarks(format!(
            "groups cover {n_covered} of the 42 non-reference mandibular landmarks"
        )));
    }
    for (id, want) in [
        ("condyle-L", reg.condyle_group_left()),
        ("condyle-R", reg.condyle_group_right()),
    ] {
        if let Some(g) = groups.iter().find(|g| g.id == id) {
            if g.members != want {
                return Err(CoreError::Landmarks(format!(
                    "group `{id}` must contain exactly {want:?}, got {:?}",
                    g.members
                )));
            }
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn default_groups_are_a_valid_nine_way_partition() {
        let groups = default_groups();
        assert_eq!(groups.len(), 9);
        validate_partition(&groups).unwrap();
        let total: usize = groups.iter().map(|g| g.members.len()).sum();
        assert_eq!(total, 42);
    }

    #[test]
    fn output_dims_are_three_per_member() {
        for g in default_groups() {
            assert_eq!(g.output_dim(), 3 * g.members.len());
        }
    }

    #[test]
    fn duplicated_member_is_rejected() {
        let mut groups = default_groups();
        groups[2].members[0] = groups[0].members[0];
        assert!(validate_partition(&groups).is_err());
    }

    #[test]
    fn wrong_condyle_membership_is_rejected() {
        let mut groups = default_groups();
        groups[0].members = vec![52, 53, 54, 56, 63, 65];
        assert!(validate_partition(&groups).is_err());
    }
}
