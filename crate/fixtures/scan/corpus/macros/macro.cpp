#define HEADER "x.h"
#include HEADER
#include "ok.h"
#include_next <next.h>
#import "objc.h"
#includes "not.h"
