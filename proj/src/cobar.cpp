#include "cobar.hpp"
