//! Benchmark inputs shared by the criterion targets.

use attractor_core::words::{fibonacci_word, thue_morse_word};
use attractor_core::Text;

pub fn fibonacci_input(target: usize) -> Text {
    let mut m = 1;
    loop {
        let f = fibonacci_word(m).expect("small index");
        if f.len() >= target {
            return f;
        }
        m += 1;
    }
}

pub fn thue_morse_input(target: usize) -> Text {
    let m = (target.max(1) as f64).log2().ceil() as u32;
    thue_morse_word(m).expect("small index")
}
