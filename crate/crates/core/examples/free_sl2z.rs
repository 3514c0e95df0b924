//! [[1, 2], [0, 1]] and [[1, 0], [2, 1]] generate a free group: no reduced
//! word up to the given length evaluates to +-1.

use resfin::cli::check_free_words;

fn main() {
    let len = std::env::args().nth(1).and_then(|a| a.parse().ok()).unwrap_or(8);
    let c = check_free_words(len);
    println!("{} reduced words of length <= {len}", c.words);
    println!("identity: {:?}, minus identity: {:?}", c.identity, c.minus_identity);
    println!("every word is nontrivial modulo some m <= {}", c.max_modulus);
}
