#![allow(dead_code)]

use hhg_core::group::{random_element, GroupModel, Word};
use hhg_core::hhs::{builders, HHGStructure};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub fn structure(name: &str) -> HHGStructure {
    HHGStructure::load(builders::by_name(name).expect("shipped structure"))
        .expect("shipped structure loads")
}

pub fn element(m: &GroupModel, seed: u64, radius: usize) -> Word {
    random_element(m, radius, &mut ChaCha8Rng::seed_from_u64(seed))
}

pub fn word(m: &GroupModel, text: &str) -> Word {
    m.parse_word(text).expect("word parses")
}
