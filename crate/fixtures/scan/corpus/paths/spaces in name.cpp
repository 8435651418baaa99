#include "file with spaces.h"
