#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace orcpool::cli {

// Exit codes: 0 success, 1 usage/validation/parameter/state error, 2 numeric
// error. Errors are reported as one line "error:<kind>: <message>" on `err`.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

struct PlotSeries {
    std::string key;
    std::vector<double> values; // indexed by t
};

// Tidy t,key,value rows. Throws ValidationError when there is nothing to emit.
void emit_plot_data(const std::vector<PlotSeries>& series, std::ostream& out);

} // namespace orcpool::cli
