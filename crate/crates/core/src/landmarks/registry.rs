//! Static registry of the 90 cephalometric landmarks.
//!
//! Indices are 1-based. Landmarks 1-8 and 47-48 are the ten easy-to-find
//! reference landmarks; 1-46 lie on the cranium and 47-90 on the mandible.
//! The mandibular reference pair is recorded as MF (mental foramen); some
//! sources label the same pair ML.

use std::sync::OnceLock;

#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
pub enum Location {
    Cranium,
    Mandible,
}

#[derive(Debug, Clone)]
pub struct Landmark {
    /// 1-based registry index.
    pub index: usize,
    pub name: &'static str,
    pub location: Location,
    pub is_reference: bool,
    /// For landmarks defined as the midpoint of two others: their indices.
    pub midpoint_of: Option<(usize, usize)>,
}

pub struct LandmarkRegistry {
    entries: Vec<Landmark>,
    lr_pairs: Vec<(usize, usize)>,
}

const N: usize = 90;

impl LandmarkRegistry {
    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn entries(&self) -> &[Landmark] {
        &self.entries
    }

    /// Landmark by 1-based index.
    pub fn get(&self, index: usize) -> &Landmark {
        &self.entries[index - 1]
    }

    pub fn by_name(&self, name: &str) -> Option<&Landmark> {
        self.entries.iter().find(|l| l.name == name)
    }

    /// All ten reference landmarks, ascending.
    pub fn reference_mask(&self) -> Vec<usize> {
        self.entries
            .iter()
            .filter(|l| l.is_reference)
            .map(|l| l.index)
            .collect()
    }

    pub fn cranial_mask(&self) -> Vec<usize> {
        (1..=46).collect()
    }

    pub fn mandibular_mask(&self) -> Vec<usize> {
        (47..=90).collect()
    }

    /// The eight cranial reference landmarks.
    pub fn cranial_reference_mask(&self) -> Vec<usize> {
        self.reference_mask().into_iter().filter(|&i| i <= 46).collect()
    }

    /// The two mandibular reference landmarks (MF L/R).
    pub fn mandibular_reference_mask(&self) -> Vec<usize> {
        self.reference_mask().into_iter().filter(|&i| i > 46).collect()
    }

    /// The three midsagittal-plane landmarks refined on the 2D integrated
    /// image: MxDML, Od, PNS.
    pub fn midsagittal_trio(&self) -> Vec<usize> {
        vec![24, 25, 26]
    }

    /// The six condylar landmarks detected jointly, per side.
    pub fn condyle_group_left(&self) -> Vec<usize> {
        vec![52, 53, 54, 56, 63, 64]
    }

    pub fn condyle_group_right(&self) -> Vec<usize> {
        vec![71, 72, 73, 75, 82, 83]
    }

    /// Bilateral (left, right) landmark pairs, used by the synthetic template
    /// for mirror symmetry.
    pub fn lr_pairs(&self) -> &[(usize, usize)] {
        &self.lr_pairs
    }

    /// Indices with no bilateral partner (midsagittal landmarks).
    pub fn midline_mask(&self) -> Vec<usize> {
        let paired: Vec<usize> = self
            .lr_pairs
            .iter()
            .flat_map(|&(l, r)| [l, r])
            .collect();
        (1..=N).filter(|i| !paired.contains(i)).collect()
    }
}

fn build() -> LandmarkRegistry {
    use Location::{Cranium, Mandible};
    let mut entries = Vec::with_capacity(N);
    let mut push = |index: usize,
                    name: &'static str,
                    location: Location,
                    is_reference: bool,
                    midpoint_of: Option<(usize, usize)>| {
        entries.push(Landmark { index, name, location, is_reference, midpoint_of });
    };

    push(1, "ANS", Cranium, true, None);
    push(2, "Bregma", Cranium, true, None);
    push(3, "CFM", Cranium, true, None);
    push(4, "Or (L)", Cranium, true, None);
    push(5, "Po (L)", Cranium, true, None);
    push(6, "Na", Cranium, true, None);
    push(7, "Or (R)", Cranium, true, None);
    push(8, "Po (R)", Cranium, true, None);
    push(9, "#16 tip", Cranium, false, None);
    push(10, "#26 tip", Cranium, false, None);
    push(11, "ANS'", Cranium, false, None);
    push(12, "AO", Cranium, false, None);
    push(13, "FC", Cranium, false, None);
    push(14, "Clp (L)", Cranium, false, None);
    push(15, "EC (L)", Cranium, false, None);
    push(16, "FM (L)", Cranium, false, None);
    push(17, "Hyp (L)", Cranium, false, None);
    push(18, "M (L)", Cranium, false, None);
    push(19, "NP (L)", Cranium, false, None);
    push(20, "Pti (L)", Cranium, false, None);
    push(21, "Pts (L)", Cranium, false, None);
    push(22, "U1 apex (L)", Cranium, false, None);
    push(23, "U1 tip (L)", Cranium, false, None);
    push(24, "MxDML", Cranium, false, None);
    push(25, "Od", Cranium, false, None);
    push(26, "PNS", Cranium, false, None);
    push(27, "Clp (R)", Cranium, false, None);
    push(28, "EC (R)", Cranium, false, None);
    push(29, "FM (R)", Cranium, false, None);
    push(30, "Hyp (R)", Cranium, false, None);
    push(31, "M (R)", Cranium, false, None);
    push(32, "Np (R)", Cranium, false, None);
    push(33, "Pti (R)", Cranium, false, None);
    push(34, "Pts (R)", Cranium, false, None);
    push(35, "U1 apex (R)", Cranium, false, None);
    push(36, "U1 tip (R)", Cranium, false, None);
    push(37, "SC", Cranium, false, None);
    push(38, "mid-Clp", Cranium, false, Some((14, 27)));
    push(39, "mid-EC", Cranium, false, Some((15, 28)));
    push(40, "mid-FM", Cranium, false, Some((16, 29)));
    push(41, "mid-M", Cranium, false, Some((18, 31)));
    push(42, "mid-Np", Cranium, false, Some((19, 32)));
    push(43, "mid-Or", Cranium, false, Some((4, 7)));
    push(44, "mid-Po", Cranium, false, Some((5, 8)));
    push(45, "mid-Pti", Cranium, false, Some((20, 33)));
    push(46, "mid-U1 tip", Cranium, false, Some((23, 36)));
    push(47, "MF (L)", Mandible, true, None);
    push(48, "MF (R)", Mandible, true, None);
    push(49, "#36 tip", Mandible, false, None);
    push(50, "#46 tip", Mandible, false, None);
    push(51, "CON (L)", Mandible, false, None);
    push(52, "COR (L)", Mandible, false, None);
    push(53, "Cp (L)", Mandible, false, None);
    push(54, "Ct-in (L)", Mandible, false, None);
    push(55, "Ct-mid (L)", Mandible, false, Some((54, 56)));
    push(56, "Ct-out (L)", Mandible, false, None);
    push(57, "F (L)", Mandible, false, None);
    push(58, "Go-in (L)", Mandible, false, None);
    push(59, "Go-mid (L)", Mandible, false, Some((58, 60)));
    push(60, "Go-post (L)", Mandible, false, None);
    push(61, "L1 apex (L)", Mandible, false, None);
    push(62, "L1 tip (L)", Mandible, false, None);
    push(63, "LCP (L)", Mandible, false, None);
    push(64, "MCP (L)", Mandible, false, None);
    push(65, "a-Go notch (L)", Mandible, false, None);
    push(66, "mid-F MF (L)", Mandible, false, Some((57, 47)));
    push(67, "Me (anat)", Mandible, false, None);
    push(68, "MnDML", Mandible, false, None);
    push(69, "Pog", Mandible, false, None);
    push(70, "CON (R)", Mandible, false, None);
    push(71, "COR (R)", Mandible, false, None);
    push(72, "Cp (R)", Mandible, false, None);
    push(73, "Ct-in (R)", Mandible, false, None);
    push(74, "Ct-mid (R)", Mandible, false, Some((73, 75)));
    push(75, "Ct-out (R)", Mandible, false, None);
    push(76, "F (R)", Mandible, false, None);
    push(77, "Go-in (R)", Mandible, false, None);
    push(78, "Go-mid (R)", Mandible, false, Some((77, 79)));
    push(79, "Go-post (R)", Mandible, false, None);
    push(80, "L1 apex (R)", Mandible, false, None);
    push(81, "L1 tip (R)", Mandible, false, None);
    push(82, "LCP (R)", Mandible, false, None);
    push(83, "MCP (R)", Mandible, false, None);
    push(84, "a-Go notch (R)", Mandible, false, None);
    push(85, "mid-F MF (R)", Mandible, false, Some((76, 48)));
    push(86, "mid-Cp", Mandible, false, Some((53, 72)));
    push(87, "mid-F", Mandible, false, Some((57, 76)));
    push(88, "mid-L1 tip", Mandible, false, Some((62, 81)));
    push(89, "mid-MF", Mandible, false, Some((47, 48)));
    push(90, "midpoint of mid-F MF (R/L)", Mandible, false, Some((66, 85)));

    let lr_pairs = vec![
        (4, 7),
        (5, 8),
        (10, 9),
        (14, 27),
        (15, 28),
        (16, 29),
        (17, 30),
        (18, 31),
        (19, 32),
        (20, 33),
        (21, 34),
        (22, 35),
        (23, 36),
        (47, 48),
        (49, 50),
        (51, 70),
        (52, 71),
        (53, 72),
        (54, 73),
        (55, 74),
        (56, 75),
        (57, 76),
        (58, 77),
        (59, 78),
        (60, 79),
        (61, 80),
        (62, 81),
        (63, 82),
        (64, 83),
        (65, 84),
        (66, 85),
    ];

    LandmarkRegistry { entries, lr_pairs }
}

/// The shared landmark registry.
pub fn registry() -> &'static LandmarkRegistry {
    static REG: OnceLock<LandmarkRegistry> = OnceLock::new();
    REG.get_or_init(build)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn indices_are_exactly_1_to_90() {
        let r = registry();
        assert_eq!(r.len(), 90);
        for (i, l) in r.entries().iter().enumerate() {
            assert_eq!(l.index, i + 1);
        }
    }

    #[test]
    fn mask_sizes() {
        let r = registry();
        assert_eq!(r.cranial_mask().len(), 46);
        assert_eq!(r.mandibular_mask().len(), 44);
        assert_eq!(r.reference_mask(), vec![1, 2, 3, 4, 5, 6, 7, 8, 47, 48]);
        assert_eq!(r.cranial_reference_mask().len(), 8);
        assert_eq!(r.mandibular_reference_mask(), vec![47, 48]);
    }

    #[test]
    fn trio_is_mxdml_od_pns() {
        let r = registry();
        let trio = r.midsagittal_trio();
        assert_eq!(
            trio.iter().map(|&i| r.get(i).name).collect::<Vec<_>>(),
            vec!["MxDML", "Od", "PNS"]
        );
    }

    #[test]
    fn condyle_groups_have_the_six_expected_members() {
        let r = registry();
        let left: Vec<&str> = r.condyle_group_left().iter().map(|&i| r.get(i).name).collect();
        assert_eq!(
            left,
            vec!["COR (L)", "Cp (L)", "Ct-in (L)", "Ct-out (L)", "LCP (L)", "MCP (L)"]
        );
        let right: Vec<&str> = r.condyle_group_right().iter().map(|&i| r.get(i).name).collect();
        assert_eq!(
            right,
            vec!["COR (R)", "Cp (R)", "Ct-in (R)", "Ct-out (R)", "LCP (R)", "MCP (R)"]
        );
    }

    #[test]
    fn locations_split_at_index_47() {
        let r = registry();
        for l in r.entries() {
            let want = if l.index <= 46 { Location::Cranium } else { Location::Mandible };
            assert_eq!(l.location, want, "landmark {}", l.index);
        }
    }

    #[test]
    fn pairs_are_cross_side_and_midline_is_the_rest() {
        let r = registry();
        assert_eq!(r.lr_pairs().len() * 2 + r.midline_mask().len(), 90);
        for &(l, rt) in r.lr_pairs() {
            assert_ne!(l, rt);
            assert_eq!(r.get(l).location, r.get(rt).location);
        }
    }

    #[test]
    fn midpoint_definitions_reference_valid_indices() {
        let r = registry();
        for l in r.entries() {
            if let Some((a, b)) = l.midpoint_of {
                assert!(a >= 1 && a <= 90 && b >= 1 && b <= 90);
                assert!(a != l.index && b != l.index);
            }
        }
    }
}
