#pragma once

// JSON Lines instance files. Line 1 is the header
//   {"n":2,"agents":[{"alpha":5,"beta":1},...],"flavor":"two_value","foresight":0}
// and every following line is one good, either {"high":[true,false]} or
// {"values":[2.5,1.0]}.

#include <filesystem>
#include <iosfwd>
#include <stdexcept>
#include <string>

#include "ofd/model.hpp"

namespace ofd {

class ParseError : public std::runtime_error {
 public:
  ParseError(std::size_t line, const std::string& what)
      : std::runtime_error("line " + std::to_string(line) + ": " + what), line_(line) {}
  std::size_t line() const { return line_; }

 private:
  std::size_t line_;
};

Instance read_instance(std::istream& in);
Instance read_instance_file(const std::filesystem::path& path);

void write_instance(std::ostream& out, const Instance& instance);
void write_instance_file(const std::filesystem::path& path, const Instance& instance);

}  // namespace ofd
