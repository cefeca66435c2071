//! Spatial primitives shared by situations, schemata, action descriptions and
//! perception: region distances, directions and path operators, following the
//! preposition-semantics account the representation is modeled on.

use serde::{Deserialize, Serialize};

/// How far a located object is from the reference object.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Distance {
    Interior,
    ExteriorButInContact,
    Proximal,
    Distal,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Polarity {
    Positive,
    Negative,
}

/// Which axis of the reference object a direction is taken along.
///
/// Directions are symbolic: `Gravity` with positive polarity means "above",
/// `FrontBack` with positive polarity means "in front of".
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
pub enum AxisKind {
    Gravity,
    FrontBack,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Direction {
    pub axis: AxisKind,
    pub polarity: Polarity,
}

impl Direction {
    pub const ABOVE: Direction = Direction {
        axis: AxisKind::Gravity,
        polarity: Polarity::Positive,
    };
    pub const BELOW: Direction = Direction {
        axis: AxisKind::Gravity,
        polarity: Polarity::Negative,
    };
    pub const IN_FRONT: Direction = Direction {
        axis: AxisKind::FrontBack,
        polarity: Polarity::Positive,
    };
    pub const BEHIND: Direction = Direction {
        axis: AxisKind::FrontBack,
        polarity: Polarity::Negative,
    };
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
pub enum PathOperator {
    Via,
    To,
    Toward,
    From,
    AwayFrom,
}

/// Coarse five-level size scale used for perceivable size relations.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
pub enum CoarseSize {
    MuchSmaller,
    Smaller,
    Same,
    Bigger,
    MuchBigger,
}

impl CoarseSize {
    /// Compare two size grades (0..=4) on the coarse scale. A difference of
    /// two or more grades counts as "much".
    pub fn compare(first: u8, second: u8) -> CoarseSize {
        let d = first as i16 - second as i16;
        match d {
            i16::MIN..=-2 => CoarseSize::MuchSmaller,
            -1 => CoarseSize::Smaller,
            0 => CoarseSize::Same,
            1 => CoarseSize::Bigger,
            _ => CoarseSize::MuchBigger,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn coarse_size_compare() {
        assert_eq!(CoarseSize::compare(0, 4), CoarseSize::MuchSmaller);
        assert_eq!(CoarseSize::compare(2, 3), CoarseSize::Smaller);
        assert_eq!(CoarseSize::compare(3, 3), CoarseSize::Same);
        assert_eq!(CoarseSize::compare(3, 2), CoarseSize::Bigger);
        assert_eq!(CoarseSize::compare(4, 0), CoarseSize::MuchBigger);
    }
}
