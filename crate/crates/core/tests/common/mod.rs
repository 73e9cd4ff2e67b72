// Copyright 2026 The hsmetro Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//    http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#![allow(dead_code)]

use std::path::PathBuf;

use hsmetro::netdsl::{parse, NetworkSpec};
use rand::Rng;

pub fn networks_dir() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("networks")
}

fn angle<R: Rng>(rng: &mut R) -> String {
    let a: f64 = rng.random_range(-2.0..2.0);
    let b: f64 = rng.random_range(-1.5..1.5);
    match rng.random_range(0..4) {
        0 => format!("{a}*phi + {b}"),
        1 => format!("{b} - {a}*phi"),
        2 => format!("sin({a}*phi)/2 + {b}"),
        _ => format!("{b}"),
    }
}

/// Random element list on `modes` modes; at least one element depends on phi.
pub fn random_network_source<R: Rng>(rng: &mut R, modes: usize) -> String {
    let mut text = format!("modes {modes}\n");
    let count = rng.random_range(modes..=3 * modes + 2);
    text.push_str(&format!("ps 1 {}*phi\n", rng.random_range(0.2..1.5)));
    for _ in 0..count {
        if modes > 1 && rng.random_bool(0.6) {
            let i = rng.random_range(1..=modes);
            let mut j = rng.random_range(1..=modes);
            while j == i {
                j = rng.random_range(1..=modes);
            }
            text.push_str(&format!("bs {i} {j} {}\n", angle(rng)));
        } else {
            text.push_str(&format!(
                "ps {} {}\n",
                rng.random_range(1..=modes),
                angle(rng)
            ));
        }
    }
    text
}

pub fn random_network<R: Rng>(rng: &mut R, modes: usize) -> NetworkSpec {
    parse(&random_network_source(rng, modes)).expect("generated network parses")
}
