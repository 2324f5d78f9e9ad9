fn main() { println!("superint"); }
