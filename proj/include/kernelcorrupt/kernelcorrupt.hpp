#pragma once

#include "kernelcorrupt/decision.hpp"
#include "kernelcorrupt/distribution.hpp"
#include "kernelcorrupt/dpe.hpp"
#include "kernelcorrupt/errors.hpp"
#include "kernelcorrupt/factorization.hpp"
#include "kernelcorrupt/inversion.hpp"
#include "kernelcorrupt/kernel.hpp"
#include "kernelcorrupt/noncore.hpp"
#include "kernelcorrupt/random_gen.hpp"
#include "kernelcorrupt/rational.hpp"
#include "kernelcorrupt/space.hpp"
#include "kernelcorrupt/taxonomy.hpp"
