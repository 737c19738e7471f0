#ifndef ODEID_ERRORS_HPP
#define ODEID_ERRORS_HPP

#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace odeid {

class Error : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

// Thrown when the adaptive integrator cannot continue (step size underflow,
// non-finite right-hand side). Carries the last good point so callers can
// report how far the integration got instead of crashing.
class IntegrationError : public Error {
  public:
    IntegrationError(const std::string &what, double t_reached, std::vector<double> last_state)
        : Error(what), t_reached_(t_reached), last_state_(std::move(last_state)) {}

    double t_reached() const { return t_reached_; }
    const std::vector<double> &last_state() const { return last_state_; }

  private:
    double t_reached_;
    std::vector<double> last_state_;
};

class RankDeficiencyError : public Error {
  public:
    RankDeficiencyError(const std::string &what, int estimated_rank)
        : Error(what), estimated_rank_(estimated_rank) {}

    int estimated_rank() const { return estimated_rank_; }

  private:
    int estimated_rank_;
};

} // namespace odeid

#endif
