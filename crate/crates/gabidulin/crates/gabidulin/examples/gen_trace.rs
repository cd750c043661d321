fn main() {
    let outcome = gabidulin::demo::run().unwrap();
    print!("{}", outcome.trace);
}
