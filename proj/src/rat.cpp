#include "intlab/rat.hpp"

#include "intlab/errors.hpp"

namespace intlab {

Rat& Rat::operator/=(const Rat& o) {
    if (o.is_zero()) throw ContractError("rat", "divide", "division by zero rational");
    v_ /= o.v_;
    return *this;
}

Rat Rat::binomial(unsigned long n, unsigned long k) {
    mpz_class b;
    mpz_bin_uiui(b.get_mpz_t(), n, k);
    return Rat::from_mpz(b);
}

}  // namespace intlab
