fn main() {
    println!("nubots CLI (under construction)");
}
