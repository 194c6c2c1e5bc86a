//! Data files shipped with the library.

use crate::affect::Palette;
use crate::lexicon::Lexicon;

pub const LEXICON: &str = include_str!("../data/lexicon.json");
pub const PALETTE: &str = include_str!("../data/palette.json");
pub const CASABLANCA_SCRIPT: &str = include_str!("../data/casablanca.script.json");
pub const CASABLANCA_RUN1_SOCIAL: &str = include_str!("../data/casablanca.run1.social.json");
pub const CASABLANCA_RUN2_SOCIAL: &str = include_str!("../data/casablanca.run2.social.json");
pub const RESTAURANT_SCRIPT: &str = include_str!("../data/restaurant.script.json");
pub const RESTAURANT_SOCIAL: &str = include_str!("../data/restaurant.social.json");

pub fn lexicon() -> Lexicon {
    Lexicon::from_json(LEXICON).expect("bundled lexicon is valid")
}

pub fn palette() -> Palette {
    Palette::from_json(PALETTE).expect("bundled palette is valid")
}
