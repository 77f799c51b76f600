// Writes a synthetic tagged corpus. The bundled corpora under data/synthetic
// were produced with the commands listed in data/synthetic/README.md.

#include <fstream>
#include <iostream>

#include "CLI11.hpp"
#include "parsec/corpus.h"
#include "parsec/synthetic.h"

int main(int argc, char** argv) {
  parsec::synthetic::Options o;
  std::string out;
  CLI::App app{"Generate a synthetic tagged review corpus"};
  app.add_option("--name", o.name, "corpus name");
  app.add_option("--instances", o.instances, "number of reviews, labels alternate");
  app.add_option("--domain", o.domain, "products, books, music or toys");
  app.add_option("--sentiment-fraction", o.sentiment_fraction, "target share of polar words");
  app.add_option("--noise", o.noise, "chance a polar word disagrees with the label");
  app.add_option("--negation", o.negation, "chance a polar word is negated");
  app.add_option("--min-words", o.min_words, "shortest review");
  app.add_option("--max-words", o.max_words, "longest review");
  app.add_option("--seed", o.seed, "random seed");
  app.add_option("--out", out, "output file (default: stdout)");
  CLI11_PARSE(app, argc, argv);

  try {
    const parsec::Corpus corpus = parsec::synthetic::generate(o);
    if (out.empty()) {
      parsec::write_tagged_corpus(std::cout, corpus);
    } else {
      std::ofstream f(out, std::ios::binary);
      parsec::write_tagged_corpus(f, corpus);
      if (!f) {
        std::cerr << "make_synthetic: cannot write '" << out << "'\n";
        return 4;
      }
    }
  } catch (const std::exception& e) {
    std::cerr << "make_synthetic: " << e.what() << '\n';
    return 2;
  }
  return 0;
}
