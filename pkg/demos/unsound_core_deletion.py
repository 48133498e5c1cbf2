"""Why deleting from the core needs a check.

Starting from the single constraint p >= 1, a proof can copy it into the
derived set, delete the original from the core, and then use dominance to
derive ~p >= 1 from the copy.  If the deletion went unchecked, the formula
would become unsatisfiable even though p = 1 satisfies it.  The checker
rejects the deletion in both modes.
"""

from pbdom.formats import parse_opb
from pbdom.state import Mode, ProofError
from pbdom.verifier import verify

PROOF = """\
pseudo-Boolean proof version 2.0
f 1
pre_order ex1
  vars
    left u1
    right v1
    aux
  end
  def
    1 v1 1 ~u1 >= 1 ;
  end
  transitivity
    vars
      fresh_right w1
    end
    proof
    qed
  end
end
load_order ex1 p
rup 1 p >= 1 ;
delc 1
dom 1 ~p >= 1 ; p -> 0
rup >= 1 ;
conclusion UNSAT
end pseudo-Boolean proof
"""


def main() -> None:
    inst = parse_opb("1 p >= 1 ;")
    for mode in Mode:
        try:
            verdict = verify(inst, PROOF, mode)
            print(f"{mode.value:9}: accepted ({verdict})")
        except ProofError as e:
            print(f"{mode.value:9}: rejected, {e}")


if __name__ == "__main__":
    main()
