#ifndef TWEETSENT_CLI_APP_HPP
#define TWEETSENT_CLI_APP_HPP

#include <string>
#include <vector>

#include "tweetsent/corpus.hpp"

namespace tweetsent {

// Entry point behind the `tweetsent` binary; exposed so tests can drive
// subcommands in-process. Returns the process exit code; failures print a
// single "error: ..." line to stderr.
int run_cli(const std::vector<std::string>& args);

// label<TAB>text corpus files (the normalized intermediate format).
// Sources are not recorded in these files; read_corpus_file tags every
// tweet with DatasetId::StsTest as a placeholder.
void write_corpus_file(const std::string& path,
                       const std::vector<LabeledTweet>& tweets);
std::vector<LabeledTweet> read_corpus_file(const std::string& path);

}  // namespace tweetsent

#endif  // TWEETSENT_CLI_APP_HPP
